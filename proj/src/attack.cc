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

#include "seclab/attack/attack.h"

#include <algorithm>
#include <set>

#include "absl/strings/str_cat.h"
#include "boost/math/distributions/chi_squared.hpp"
#include "seclab/protocol/masking.h"
#include "seclab/status.h"

namespace seclab {
namespace {

using Json = nlohmann::ordered_json;

constexpr size_t kExactBinLimit = 64;
constexpr size_t kRangeBins = 16;
constexpr double kMinExpected = 5.0;

absl::StatusOr<GroupElement> ElementAt(const GroupParams& params,
                                       const RoundMessage& record, uint64_t k,
                                       size_t m) {
  if (record.round != 1 || record.type != MsgType::kMaskedUpdate) {
    return MakeError(ErrorKind::kMalformedMessage, "not a round-1 masked update");
  }
  auto decoded = DecodeElementVector(record.payload, kAnyLength, params);
  if (!decoded.ok() || decoded->k != k || m >= decoded->elements.size()) {
    return MakeError(ErrorKind::kNoSolution,
                     absl::StrCat("no usable element for k=", k, " m=", m));
  }
  return decoded->elements[m];
}

Json PairToJson(const IterationPair& pair) {
  return Json::array({pair.k1, pair.k2});
}

}  // namespace

std::vector<IterationPair> AllPairs(uint64_t iterations) {
  std::vector<IterationPair> pairs;
  for (uint64_t k1 = 1; k1 <= iterations; ++k1) {
    for (uint64_t k2 = k1 + 1; k2 <= iterations; ++k2) pairs.push_back({k1, k2});
  }
  return pairs;
}

std::map<std::pair<uint64_t, uint64_t>, const RoundMessage*> IndexMaskedUpdates(
    const Transcript& transcript) {
  std::map<std::pair<uint64_t, uint64_t>, const RoundMessage*> index;
  for (const auto& rec : transcript.records) {
    if (rec.msg.round != 1 || rec.msg.type != MsgType::kMaskedUpdate) continue;
    index.emplace(std::make_pair(rec.msg.sender, rec.msg.k), &rec.msg);
  }
  return index;
}

absl::StatusOr<Scalar> ExtractExponent(const GroupParams& params,
                                       const RoundMessage& record, uint64_t k,
                                       size_t m) {
  SECLAB_ASSIGN_OR_RETURN(GroupElement element, ElementAt(params, record, k, m));
  return FullDlog(params, IterationBase(params, k, m), element);
}

absl::StatusOr<Scalar> RecoverDifference(const GroupParams& params,
                                         const Transcript& transcript,
                                         uint64_t user, size_t m, uint64_t k1,
                                         uint64_t k2) {
  auto index = IndexMaskedUpdates(transcript);
  auto it1 = index.find({user, k1});
  auto it2 = index.find({user, k2});
  if (it1 == index.end() || it2 == index.end()) {
    return MakeError(ErrorKind::kMissingMessage,
                     absl::StrCat("no round-1 message from user ", user,
                                  " in iteration ",
                                  it1 == index.end() ? k1 : k2));
  }
  SECLAB_ASSIGN_OR_RETURN(Scalar x1, ExtractExponent(params, *it1->second, k1, m));
  SECLAB_ASSIGN_OR_RETURN(Scalar x2, ExtractExponent(params, *it2->second, k2, m));
  return ScalarSub(params, x2, x1);
}

UniformityTest ChiSquareUniform(const std::vector<mpz_class>& residues,
                                const mpz_class& q) {
  UniformityTest test;
  test.samples = residues.size();
  if (residues.empty()) return test;
  std::vector<double> weights;  // fraction of Z_q covered by each bin
  std::vector<double> observed;
  if (q <= kExactBinLimit) {
    const size_t bins = q.get_ui();
    weights.assign(bins, 1.0 / static_cast<double>(bins));
    observed.assign(bins, 0.0);
    for (const auto& r : residues) observed[r.get_ui()] += 1.0;
  } else {
    // Bin b covers [ceil(b q / B), ceil((b + 1) q / B)).
    std::vector<mpz_class> edges(kRangeBins + 1);
    for (size_t b = 0; b <= kRangeBins; ++b) {
      mpz_class num = q * static_cast<unsigned long>(b);
      mpz_cdiv_q_ui(edges[b].get_mpz_t(), num.get_mpz_t(), kRangeBins);
    }
    for (size_t b = 0; b < kRangeBins; ++b) {
      mpz_class width = edges[b + 1] - edges[b];
      weights.push_back(width.get_d() / q.get_d());
    }
    observed.assign(kRangeBins, 0.0);
    for (const auto& r : residues) {
      auto it = std::upper_bound(edges.begin(), edges.end(), r);
      observed[static_cast<size_t>(it - edges.begin()) - 1] += 1.0;
    }
  }
  test.bins = observed.size();
  const double n = static_cast<double>(residues.size());
  bool sparse = false;
  for (size_t b = 0; b < observed.size(); ++b) {
    const double expected = n * weights[b];
    if (expected < kMinExpected) sparse = true;
    test.statistic += (observed[b] - expected) * (observed[b] - expected) / expected;
  }
  if (!sparse && test.bins >= 2) {
    boost::math::chi_squared dist(static_cast<double>(test.bins - 1));
    test.p_value = boost::math::cdf(boost::math::complement(dist, test.statistic));
  }
  return test;
}

absl::StatusOr<AttackReport> EvaluateAttack(const GroupParams& params,
                                            const Transcript& transcript,
                                            size_t vector_len,
                                            const GroundTruthInputs& truth,
                                            const std::vector<IterationPair>& pairs) {
  AttackReport report;
  report.q = params.q;
  report.pairs = pairs;
  auto index = IndexMaskedUpdates(transcript);

  std::set<uint64_t> iterations;
  for (const auto& pair : pairs) {
    iterations.insert(pair.k1);
    iterations.insert(pair.k2);
  }

  // exponents[(user, k)][m]; absent when the message or its discrete log is
  // missing.
  std::map<std::pair<uint64_t, uint64_t>, std::vector<std::optional<Scalar>>>
      exponents;
  for (uint64_t k : iterations) {
    for (size_t m = 0; m < vector_len; ++m) {
      std::optional<DlogSolver> solver;
      for (const auto& [user, unused] : truth) {
        auto it = index.find({user, k});
        if (it == index.end()) continue;
        auto& row = exponents[{user, k}];
        row.resize(vector_len);
        auto element = ElementAt(params, *it->second, k, m);
        if (!element.ok()) continue;
        if (!solver.has_value()) {
          SECLAB_ASSIGN_OR_RETURN(
              DlogSolver built,
              DlogSolver::Create(params, IterationBase(params, k, m), params.q));
          solver.emplace(std::move(built));
        }
        auto x = solver->Solve(*element);
        report.dlog_extractions++;
        if (x.ok()) row[m] = *std::move(x);
      }
      if (solver.has_value()) report.dlog_steps += solver->steps();
    }
  }

  std::vector<mpz_class> residues;
  for (const auto& [user, per_k] : truth) {
    for (const auto& pair : pairs) {
      auto e1 = exponents.find({user, pair.k1});
      auto e2 = exponents.find({user, pair.k2});
      const bool have_truth = pair.k1 >= 1 && pair.k2 >= 1 &&
                              pair.k1 <= per_k.size() && pair.k2 <= per_k.size();
      bool usable = have_truth && e1 != exponents.end() && e2 != exponents.end();
      for (size_t m = 0; usable && m < vector_len; ++m) {
        usable = e1->second[m].has_value() && e2->second[m].has_value() &&
                 m < per_k[pair.k1 - 1].size() && m < per_k[pair.k2 - 1].size();
      }
      if (!usable) {
        report.skipped.emplace_back(user, pair);
        continue;
      }
      for (size_t m = 0; m < vector_len; ++m) {
        AttackTriple triple;
        triple.user = user;
        triple.coordinate = m;
        triple.pair = pair;
        triple.recovered_diff = ScalarSub(params, *e2->second[m], *e1->second[m]);
        triple.true_diff = ScalarSub(
            params, ReduceScalar(params, mpz_class(per_k[pair.k2 - 1][m])),
            ReduceScalar(params, mpz_class(per_k[pair.k1 - 1][m])));
        triple.match = triple.recovered_diff == triple.true_diff;
        if (triple.match) report.matches++;
        residues.push_back(
            ScalarSub(params, triple.recovered_diff, triple.true_diff).value);
        report.triples.push_back(std::move(triple));
      }
    }
  }
  if (!report.triples.empty()) {
    report.match_rate = static_cast<double>(report.matches) /
                        static_cast<double>(report.triples.size());
  }
  report.residues = ChiSquareUniform(residues, params.q);
  return report;
}

Json AttackReport::ToJson() const {
  Json j;
  j["q"] = q.get_str();
  Json ps = Json::array();
  for (const auto& pair : pairs) ps.push_back(PairToJson(pair));
  j["pairs"] = ps;
  j["triples_total"] = triples.size();
  j["matches"] = matches;
  if (match_rate.has_value()) {
    j["match_rate"] = *match_rate;
  } else {
    j["match_rate"] = nullptr;
    j["match_rate_undefined"] = true;
  }
  Json uni;
  uni["samples"] = residues.samples;
  uni["bins"] = residues.bins;
  uni["chi_square"] = residues.statistic;
  uni["p_value"] = residues.p_value.has_value() ? Json(*residues.p_value)
                                                : Json(nullptr);
  j["residue_uniformity"] = uni;
  j["dlog_extractions"] = dlog_extractions;
  j["dlog_steps"] = dlog_steps;
  Json sk = Json::array();
  for (const auto& [user, pair] : skipped) {
    sk.push_back({{"user", user}, {"pair", PairToJson(pair)}});
  }
  j["skipped"] = sk;
  Json ts = Json::array();
  for (const auto& t : triples) {
    Json row;
    row["user"] = t.user;
    row["coordinate"] = t.coordinate;
    row["pair"] = PairToJson(t.pair);
    row["recovered_diff"] = t.recovered_diff.value.get_str();
    row["true_diff"] = t.true_diff.value.get_str();
    row["match"] = t.match;
    ts.push_back(row);
  }
  j["triples"] = ts;
  return j;
}

}  // namespace seclab
