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

#ifndef SECLAB_SIM_TRANSCRIPT_H_
#define SECLAB_SIM_TRANSCRIPT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "seclab/protocol/messages.h"

namespace seclab {

struct TranscriptRecord {
  uint64_t step = 0;  // round-barrier index at which the message was delivered
  RoundMessage msg;

  friend bool operator==(const TranscriptRecord&, const TranscriptRecord&) = default;
};

// Everything that crossed the wire, in delivery order: exactly what a
// passive eavesdropper records.
struct Transcript {
  std::vector<TranscriptRecord> records;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

// JSON-lines, one record per message:
//   {"step":..,"k":..,"round":..,"sender":..,"receiver":..,"msg_type":"..",
//    "payload_hex":"..","mac_hex":".."}
// Party 0 is the server; "mac_hex" is present only on MACed messages.
std::string SerializeTranscript(const Transcript& transcript);

// MalformedRecord (with the 1-based line number) on any undecodable line or
// payload. An empty input is an empty transcript.
absl::StatusOr<Transcript> ParseTranscript(std::string_view contents);

absl::Status WriteTranscript(const Transcript& transcript,
                             const std::string& path);
absl::StatusOr<Transcript> ReplayTranscript(const std::string& path);

}  // namespace seclab

#endif  // SECLAB_SIM_TRANSCRIPT_H_
