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

#ifndef SECLAB_SIM_BENCH_H_
#define SECLAB_SIM_BENCH_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "seclab/protocol/config.h"

namespace seclab {

struct BenchRow {
  uint32_t n = 0;
  uint32_t t = 0;
  bool multisig = false;
  bool completed = false;
  // Per user, aggregation round 3, averaged over the users that ran it.
  double signature_verifications = 0.0;
  double bytes_received = 0.0;
  // Wire size of the aggregate signature, when the defense is on.
  std::optional<size_t> aggregate_signature_bytes;
};

// One malicious-mode iteration without dropouts per (size, multisig off/on).
// `base` supplies every field except n, t, mode and the multisig flag;
// t = ceil(2n / 3). InvalidConfig for an empty or invalid size list.
absl::StatusOr<std::vector<BenchRow>> RunBench(const ProtocolConfig& base,
                                               const std::vector<uint32_t>& sizes);

nlohmann::ordered_json BenchToJson(const std::vector<BenchRow>& rows);

}  // namespace seclab

#endif  // SECLAB_SIM_BENCH_H_
