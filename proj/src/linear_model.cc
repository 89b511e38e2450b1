/*
 * Copyright 2026 The seclab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "seclab/attack/linear_model.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "seclab/status.h"

namespace seclab {
namespace {

using Json = nlohmann::ordered_json;

double Symmetric(Prng& prng) { return 2.0 * prng.UniformDouble() - 1.0; }

Eigen::VectorXd RandomVector(size_t dim, Prng& prng) {
  Eigen::VectorXd v(dim);
  for (size_t i = 0; i < dim; ++i) v[i] = Symmetric(prng);
  return v;
}

Json VectorToJson(const Eigen::VectorXd& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

Eigen::VectorXd VectorFromJson(const Json& j) {
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[i] = j.at(i).get<double>();
  return v;
}

}  // namespace

LinearModelScenario LinearModelScenario::Create(const ProtocolConfig& config,
                                                Prng& prng) {
  LinearModelScenario s;
  s.dim = config.vector_len;
  s.input_bits = config.input_bits;
  s.scale = (std::ldexp(1.0, static_cast<int>(config.input_bits) - 1) - 1.0) /
            static_cast<double>(s.dim + 1);
  for (uint64_t i = 1; i <= config.n; ++i) {
    LinearSample sample;
    sample.a = RandomVector(s.dim, prng);
    sample.b = Symmetric(prng);
    s.samples.emplace(i, std::move(sample));
  }
  for (uint64_t k = 1; k <= config.iterations; ++k) {
    s.models.push_back(RandomVector(s.dim, prng));
  }
  return s;
}

Eigen::VectorXd LinearModelScenario::Gradient(uint64_t k, uint64_t user) const {
  const LinearSample& s = samples.at(user);
  return (models.at(k - 1).dot(s.a) - s.b) * s.a;
}

std::vector<uint64_t> LinearModelScenario::Quantize(
    const Eigen::VectorXd& gradient) const {
  const int64_t offset = int64_t{1} << (input_bits - 1);
  const int64_t max = (int64_t{1} << input_bits) - 1;
  std::vector<uint64_t> out;
  for (Eigen::Index i = 0; i < gradient.size(); ++i) {
    int64_t v = std::llround(gradient[i] * scale) + offset;
    out.push_back(static_cast<uint64_t>(std::clamp<int64_t>(v, 0, max)));
  }
  return out;
}

InputSource LinearModelScenario::AsInputSource() const {
  return [scenario = *this](uint64_t k, uint64_t user, Prng&) {
    return scenario.Quantize(scenario.Gradient(k, user));
  };
}

Json LinearModelScenario::ToJson() const {
  Json j;
  j["name"] = "linear-model";
  j["dim"] = dim;
  j["input_bits"] = input_bits;
  j["scale"] = scale;
  Json ss = Json::object();
  for (const auto& [id, s] : samples) {
    ss[std::to_string(id)] = {{"a", VectorToJson(s.a)}, {"b", s.b}};
  }
  j["private_samples"] = ss;
  Json ms = Json::array();
  for (const auto& w : models) ms.push_back(VectorToJson(w));
  j["public_models"] = ms;
  return j;
}

absl::StatusOr<LinearModelScenario> LinearModelScenario::FromJson(const Json& j) {
  try {
    LinearModelScenario s;
    s.dim = j.at("dim").get<size_t>();
    s.input_bits = j.at("input_bits").get<uint32_t>();
    s.scale = j.at("scale").get<double>();
    for (const auto& [id, sample] : j.at("private_samples").items()) {
      s.samples.emplace(std::stoull(id),
                        LinearSample{VectorFromJson(sample.at("a")),
                                     sample.at("b").get<double>()});
    }
    for (const auto& w : j.at("public_models")) s.models.push_back(VectorFromJson(w));
    return s;
  } catch (const std::exception& e) {
    return MakeError(ErrorKind::kMalformedRecord,
                     absl::StrCat("bad linear-model scenario: ", e.what()));
  }
}

Eigen::VectorXd DecodeSignedDifference(const std::vector<Scalar>& diff,
                                       const mpz_class& q, double scale) {
  Eigen::VectorXd out(diff.size());
  const mpz_class half = q / 2;
  for (size_t i = 0; i < diff.size(); ++i) {
    mpz_class v = diff[i].value > half ? mpz_class(diff[i].value - q) : diff[i].value;
    out[i] = v.get_d() / scale;
  }
  return out;
}

absl::StatusOr<InversionResult> LinearInversionDemo(
    const Eigen::VectorXd& diff, const Eigen::VectorXd& w_k1,
    const Eigen::VectorXd& w_k2, const Eigen::VectorXd& true_sample) {
  const double norm = diff.norm();
  const double projected = (w_k2 - w_k1).dot(diff);
  if (norm == 0.0 || !(projected > 0.0)) {
    return MakeError(ErrorKind::kDegenerateScale,
                     "update difference carries no usable scale");
  }
  InversionResult result;
  result.direction = diff / norm;
  result.reconstruction = result.direction * (norm / std::sqrt(projected));
  const double sample_norm = true_sample.norm();
  result.abs_cosine =
      sample_norm == 0.0 ? 0.0 : std::abs(result.direction.dot(true_sample)) / sample_norm;
  return result;
}

Json RunInversionDemo(const AttackReport& report,
                      const LinearModelScenario& scenario) {
  std::map<std::pair<uint64_t, std::pair<uint64_t, uint64_t>>, std::vector<Scalar>>
      diffs;
  for (const auto& t : report.triples) {
    auto& row = diffs[{t.user, {t.pair.k1, t.pair.k2}}];
    row.resize(scenario.dim);
    if (t.coordinate < scenario.dim) row[t.coordinate] = t.recovered_diff;
  }
  Json rows = Json::array();
  double cosine_sum = 0.0;
  size_t solved = 0;
  size_t degenerate = 0;
  for (const auto& [key, diff] : diffs) {
    const auto& [user, pair] = key;
    Json row;
    row["user"] = user;
    row["pair"] = Json::array({pair.first, pair.second});
    auto sample = scenario.samples.find(user);
    if (sample == scenario.samples.end() || pair.first > scenario.models.size() ||
        pair.second > scenario.models.size()) {
      continue;
    }
    auto result = LinearInversionDemo(
        DecodeSignedDifference(diff, report.q, scenario.scale),
        scenario.models[pair.first - 1], scenario.models[pair.second - 1],
        sample->second.a);
    if (result.ok()) {
      row["abs_cosine"] = result->abs_cosine;
      row["reconstruction"] = VectorToJson(result->reconstruction);
      cosine_sum += result->abs_cosine;
      solved++;
    } else {
      row["error"] = std::string(ErrorKindName(ErrorKind::kDegenerateScale));
      degenerate++;
    }
    rows.push_back(row);
  }
  Json j;
  j["solved"] = solved;
  j["degenerate"] = degenerate;
  j["mean_abs_cosine"] = solved == 0 ? Json(nullptr)
                                     : Json(cosine_sum / static_cast<double>(solved));
  j["results"] = rows;
  return j;
}

}  // namespace seclab
