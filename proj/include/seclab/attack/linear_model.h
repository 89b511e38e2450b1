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

#ifndef SECLAB_ATTACK_LINEAR_MODEL_H_
#define SECLAB_ATTACK_LINEAR_MODEL_H_

#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "seclab/attack/attack.h"
#include "seclab/protocol/config.h"
#include "seclab/sim/simulation.h"

namespace seclab {

// One private training sample (a, b) of a one-layer linear model.
struct LinearSample {
  Eigen::VectorXd a;
  double b = 0.0;
};

// Each user's update in iteration k is the squared-loss gradient
// g = (w_k . a - b) a on its private sample, for a public global model w_k.
//
// Quantization: every entry of a, b and w_k lies in [-1, 1], so
// |g[m]| <= dim + 1. With scale S = (2^(bits-1) - 1) / (dim + 1) the value
// round(S g[m]) + 2^(bits-1) always lies in [1, 2^bits - 1].
struct LinearModelScenario {
  size_t dim = 0;
  uint32_t input_bits = 0;
  double scale = 0.0;
  std::map<uint64_t, LinearSample> samples;  // keyed by user id
  std::vector<Eigen::VectorXd> models;       // models[k - 1] = w_k

  static LinearModelScenario Create(const ProtocolConfig& config, Prng& prng);

  Eigen::VectorXd Gradient(uint64_t k, uint64_t user) const;
  std::vector<uint64_t> Quantize(const Eigen::VectorXd& gradient) const;
  InputSource AsInputSource() const;

  nlohmann::ordered_json ToJson() const;
  static absl::StatusOr<LinearModelScenario> FromJson(
      const nlohmann::ordered_json& j);
};

// Maps a difference of offset-encoded values mod q back to reals: residues
// above q / 2 are negative, then divided by `scale`.
Eigen::VectorXd DecodeSignedDifference(const std::vector<Scalar>& diff,
                                       const mpz_class& q, double scale);

struct InversionResult {
  Eigen::VectorXd direction;       // unit vector, sign unresolved
  Eigen::VectorXd reconstruction;  // direction * estimated |a|
  double abs_cosine = 0.0;         // |cos(direction, a)|; a and -a are equivalent
};

// diff = g_{k2} - g_{k1} = ((w_{k2} - w_{k1}) . a) a is parallel to a, and
// (w_{k2} - w_{k1}) . diff = ((w_{k2} - w_{k1}) . a)^2 fixes |a|.
// DegenerateScale when diff is zero or that dot product is not positive.
absl::StatusOr<InversionResult> LinearInversionDemo(
    const Eigen::VectorXd& diff, const Eigen::VectorXd& w_k1,
    const Eigen::VectorXd& w_k2, const Eigen::VectorXd& true_sample);

// Runs the inversion for every (user, pair) with all coordinates recovered.
nlohmann::ordered_json RunInversionDemo(const AttackReport& report,
                                        const LinearModelScenario& scenario);

}  // namespace seclab

#endif  // SECLAB_ATTACK_LINEAR_MODEL_H_
