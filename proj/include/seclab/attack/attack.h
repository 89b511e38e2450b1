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

#ifndef SECLAB_ATTACK_ATTACK_H_
#define SECLAB_ATTACK_ATTACK_H_

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "seclab/group_math.h"
#include "seclab/protocol/messages.h"
#include "seclab/sim/transcript.h"

namespace seclab {

// True inputs: inputs[user][k - 1][m].
using GroundTruthInputs = std::map<uint64_t, std::vector<std::vector<uint64_t>>>;

struct IterationPair {
  uint64_t k1 = 0;
  uint64_t k2 = 0;
  friend bool operator==(const IterationPair&, const IterationPair&) = default;
};

// All pairs k1 < k2 in [1, iterations].
std::vector<IterationPair> AllPairs(uint64_t iterations);

// The only traffic the attack reads: round-1 MaskedUpdate records, indexed by
// (sender, k). The first record per key wins.
std::map<std::pair<uint64_t, uint64_t>, const RoundMessage*> IndexMaskedUpdates(
    const Transcript& transcript);

// Full discrete log of coordinate m of a round-1 MaskedUpdate on base
// H(k || m). NoSolution for a malformed or out-of-subgroup element.
absl::StatusOr<Scalar> ExtractExponent(const GroupParams& params,
                                       const RoundMessage& record, uint64_t k,
                                       size_t m);

// (X^{k2}[m] - X^{k1}[m]) mod q for one user. MissingMessage when either
// round-1 message is absent from the transcript.
absl::StatusOr<Scalar> RecoverDifference(const GroupParams& params,
                                         const Transcript& transcript,
                                         uint64_t user, size_t m, uint64_t k1,
                                         uint64_t k2);

struct AttackTriple {
  uint64_t user = 0;
  size_t coordinate = 0;
  IterationPair pair;
  Scalar recovered_diff;
  Scalar true_diff;
  bool match = false;
};

// Pearson chi-square of residues (recovered - true) mod q against the
// uniform distribution on Z_q. Residues are binned exactly when q <= 64,
// otherwise into 16 near-equal ranges weighted by their width.
struct UniformityTest {
  size_t samples = 0;
  size_t bins = 0;
  double statistic = 0.0;
  // Upper-tail probability; absent when any expected count is below 5.
  std::optional<double> p_value;
};

struct AttackReport {
  mpz_class q;
  std::vector<IterationPair> pairs;
  std::vector<AttackTriple> triples;
  // (user, pair) combinations skipped because a round-1 message was missing
  // or its element had no discrete log.
  std::vector<std::pair<uint64_t, IterationPair>> skipped;
  size_t matches = 0;
  std::optional<double> match_rate;  // absent when there are no triples
  UniformityTest residues;
  uint64_t dlog_extractions = 0;
  uint64_t dlog_steps = 0;

  nlohmann::ordered_json ToJson() const;
};

UniformityTest ChiSquareUniform(const std::vector<mpz_class>& residues,
                                const mpz_class& q);

// Runs the difference attack on every user present in the ground truth, every
// coordinate and every pair. One discrete-log table is built per base and
// shared by all users.
absl::StatusOr<AttackReport> EvaluateAttack(const GroupParams& params,
                                            const Transcript& transcript,
                                            size_t vector_len,
                                            const GroundTruthInputs& truth,
                                            const std::vector<IterationPair>& pairs);

}  // namespace seclab

#endif  // SECLAB_ATTACK_ATTACK_H_
