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

#ifndef SECLAB_SIM_SIMULATION_H_
#define SECLAB_SIM_SIMULATION_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "seclab/prng.h"
#include "seclab/protocol/config.h"
#include "seclab/sim/transcript.h"

namespace seclab {

// Users offline for an entire iteration, keyed by iteration (1-based).
struct DropoutSchedule {
  double rate = 0.0;
  std::map<uint64_t, std::set<uint64_t>> offline;
};

// Per iteration: a uniformly random offline set whose size is uniform in
// [0, floor(rate * n)]. InfeasibleRate unless rate * n <= n - t.
absl::StatusOr<DropoutSchedule> ScheduleDropouts(const ProtocolConfig& config,
                                                 double rate, Prng& prng);

enum class AdversaryKind { kNone, kPassive, kTamper };

std::string_view AdversaryName(AdversaryKind kind);
absl::StatusOr<AdversaryKind> ParseAdversary(std::string_view name);

// XORs `xor_mask` into byte `byte_offset` of user `user`'s round-1 payload
// in iteration `k` while it is in flight.
struct TamperTarget {
  uint64_t k = 0;
  uint64_t user = 0;
  size_t byte_offset = 0;
  uint8_t xor_mask = 0;
};

struct Adversary {
  AdversaryKind kind = AdversaryKind::kNone;
  // For kTamper: when empty, one random online user per iteration has one bit
  // of one masked element flipped.
  std::vector<TamperTarget> targets;
};

// Supplies x_i^k; called once per (k, user) in increasing order of k then
// user, for every user including offline ones.
using InputSource =
    std::function<std::vector<uint64_t>(uint64_t k, uint64_t user, Prng& prng)>;

struct RunOptions {
  double dropout_rate = 0.0;
  Adversary adversary;
  InputSource inputs;  // default: uniform over [0, 2^input_bits)
};

enum class Role { kUser, kServer };
enum class Phase { kSetup, kAggregation };

struct MetricsCell {
  uint64_t activations = 0;  // party steps
  uint64_t messages_sent = 0;
  uint64_t bytes_sent = 0;
  uint64_t messages_received = 0;
  uint64_t bytes_received = 0;
  uint64_t signature_verifications = 0;
  uint64_t group_exponentiations = 0;

  friend bool operator==(const MetricsCell&, const MetricsCell&) = default;
};

struct Metrics {
  std::map<std::tuple<Role, Phase, int>, MetricsCell> cells;
  uint64_t dlog_steps = 0;  // server discrete-log search, whole run

  const MetricsCell& At(Role role, Phase phase, int round) const;
  MetricsCell& Mutable(Role role, Phase phase, int round) {
    return cells[{role, phase, round}];
  }
};

struct IterationRecord {
  uint64_t k = 0;
  std::vector<uint64_t> scheduled_offline;
  std::vector<uint64_t> senders;  // users whose round-1 message was sent
  std::vector<uint64_t> online;   // the server's O
  std::vector<uint64_t> responders;
  std::vector<uint64_t> mac_rejected;
  std::vector<uint64_t> malformed_rejected;
  std::vector<uint64_t> tampered;
  // sum_{i in O} x_i^k over true inputs (over the senders when the server
  // never fixed O).
  std::vector<uint64_t> ground_truth;
  std::optional<std::vector<uint64_t>> output;
  std::optional<std::string> abort;  // ErrorKind name or status text
  std::map<uint64_t, std::string> user_aborts;

  bool completed() const { return output.has_value(); }
  bool correct() const { return output.has_value() && *output == ground_truth; }
};

struct RunReport {
  ProtocolConfig config;
  double dropout_rate = 0.0;
  AdversaryKind adversary = AdversaryKind::kNone;
  std::optional<std::string> setup_abort;
  std::vector<uint64_t> setup_user_set;  // U_S
  std::map<uint64_t, std::string> setup_user_aborts;
  std::vector<IterationRecord> iterations;
  // inputs[user][k - 1] = x_user^k
  std::map<uint64_t, std::vector<std::vector<uint64_t>>> inputs;
  Metrics metrics;
  std::string transcript_sha256;
  nlohmann::ordered_json extra;  // scenario-specific data, echoed verbatim

  nlohmann::ordered_json ToJson() const;
};

struct RunOutcome {
  RunReport report;
  Transcript transcript;
  // Oracle data for tests: every user's secrets (row-major K x L or L).
  std::map<uint64_t, std::vector<Scalar>> secrets;
};

// Runs setup once and K aggregation iterations behind round barriers.
// Protocol aborts are recorded in the report; only an invalid config or an
// infeasible dropout rate fails the call.
absl::StatusOr<RunOutcome> RunSimulation(const ProtocolConfig& config,
                                         const RunOptions& options);

// Decimal-string encoding of the masking group used in report headers.
nlohmann::ordered_json GroupParamsToJson(const GroupParams& params);
absl::StatusOr<GroupParams> GroupParamsFromJson(const nlohmann::ordered_json& j);

// Report header: enough to re-derive public parameters from a stored report.
nlohmann::ordered_json ConfigToJson(const ProtocolConfig& config);
absl::StatusOr<ProtocolConfig> ConfigFromJson(const nlohmann::ordered_json& j);

}  // namespace seclab

#endif  // SECLAB_SIM_SIMULATION_H_
