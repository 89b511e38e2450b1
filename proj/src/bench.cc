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

#include "seclab/sim/bench.h"

#include "absl/strings/str_cat.h"
#include "seclab/protocol/messages.h"
#include "seclab/sim/simulation.h"
#include "seclab/status.h"

namespace seclab {

absl::StatusOr<std::vector<BenchRow>> RunBench(const ProtocolConfig& base,
                                               const std::vector<uint32_t>& sizes) {
  if (sizes.empty()) {
    return MakeError(ErrorKind::kInvalidConfig, "no bench sizes given");
  }
  std::vector<BenchRow> rows;
  for (uint32_t n : sizes) {
    if (n < 2) {
      return MakeError(ErrorKind::kInvalidConfig,
                       absl::StrCat("bench size ", n, " is below 2"));
    }
    for (bool multisig : {false, true}) {
      ProtocolConfig config = base;
      config.n = n;
      config.t = (2 * n + 2) / 3;
      config.iterations = 1;
      config.mode = Mode::kMalicious;
      config.defenses.multisig = multisig;
      SECLAB_ASSIGN_OR_RETURN(RunOutcome outcome, RunSimulation(config, {}));
      BenchRow row;
      row.n = n;
      row.t = config.t;
      row.multisig = multisig;
      row.completed = !outcome.report.iterations.empty() &&
                      outcome.report.iterations.front().completed();
      const MetricsCell& cell =
          outcome.report.metrics.At(Role::kUser, Phase::kAggregation, 3);
      if (cell.activations > 0) {
        const double users = static_cast<double>(cell.activations);
        row.signature_verifications =
            static_cast<double>(cell.signature_verifications) / users;
        row.bytes_received = static_cast<double>(cell.bytes_received) / users;
      }
      for (const auto& rec : outcome.transcript.records) {
        if (rec.msg.type != MsgType::kAggregateSignature) continue;
        auto bundle = DecodeAggregateBundle(rec.msg.payload);
        if (bundle.ok()) row.aggregate_signature_bytes = bundle->aggregate.size();
        break;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

nlohmann::ordered_json BenchToJson(const std::vector<BenchRow>& rows) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json j;
    j["users"] = row.n;
    j["threshold"] = row.t;
    j["multisig"] = row.multisig;
    j["completed"] = row.completed;
    j["round3_signature_verifications_per_user"] = row.signature_verifications;
    j["round3_bytes_received_per_user"] = row.bytes_received;
    j["aggregate_signature_bytes"] =
        row.aggregate_signature_bytes.has_value()
            ? nlohmann::ordered_json(*row.aggregate_signature_bytes)
            : nlohmann::ordered_json(nullptr);
    out.push_back(j);
  }
  return out;
}

}  // namespace seclab
