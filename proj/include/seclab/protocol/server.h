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

#ifndef SECLAB_PROTOCOL_SERVER_H_
#define SECLAB_PROTOCOL_SERVER_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "seclab/crypto.h"
#include "seclab/group_math.h"
#include "seclab/prng.h"
#include "seclab/protocol/config.h"
#include "seclab/protocol/messages.h"
#include "seclab/protocol/user.h"

namespace seclab {

// Server state machine. Setup has two server rounds; every aggregation
// iteration has up to three (round 2 only in malicious mode). Aborts inside
// an iteration end that iteration only; a setup abort is permanent.
class Server {
 public:
  Server(ProtocolConfig config, PartyIdentity identity,
         std::shared_ptr<const VerificationKeys> keys, Prng prng);

  // Round 1 verifies key announcements, fixes U_S and relays the signed key
  // list. Round 2 routes every encrypted share to its receiver.
  absl::StatusOr<std::vector<RoundMessage>> SetupStep(
      int round, std::span<const RoundMessage> inbox);

  // Builds O from well-formed (and, with the MAC defense, authentic) masked
  // updates and sends it to every member.
  absl::StatusOr<std::vector<RoundMessage>> CollectRound1(
      uint64_t k, std::span<const RoundMessage> inbox);
  // Malicious mode: forwards the valid signatures on (O, k), or one aggregate.
  absl::StatusOr<std::vector<RoundMessage>> CollectRound2(
      uint64_t k, std::span<const RoundMessage> inbox);
  // Reconstructs the mask product from the zeta values and recovers
  // sum_{i in O} x_i per coordinate.
  absl::StatusOr<std::vector<uint64_t>> Unmask(uint64_t k,
                                               std::span<const RoundMessage> inbox);

  const std::set<uint64_t>& user_set() const { return user_set_; }
  const std::vector<uint64_t>& online_set() const { return online_; }
  const std::vector<uint64_t>& responders() const { return responders_; }
  // Senders of the current iteration dropped for a missing or bad MAC.
  const std::vector<uint64_t>& mac_rejected() const { return mac_rejected_; }
  // Senders of the current iteration dropped for a malformed update.
  const std::vector<uint64_t>& malformed_rejected() const {
    return malformed_rejected_;
  }
  const mpz_class& ka_public_key() const { return ka_.pk; }
  const OpCounts& last_step_ops() const { return ops_; }

 private:
  std::vector<RoundMessage> ToEach(uint64_t k, int round, MsgType type,
                                   const std::vector<uint64_t>& receivers,
                                   const Bytes& payload) const;
  absl::StatusOr<std::vector<RoundMessage>> SetupRound1(
      std::span<const RoundMessage> inbox);
  absl::StatusOr<std::vector<RoundMessage>> SetupRound2(
      std::span<const RoundMessage> inbox);
  void BeginStep();

  ProtocolConfig config_;
  PartyIdentity identity_;
  std::shared_ptr<const VerificationKeys> keys_;
  Prng prng_;
  KeyPair ka_;

  std::optional<absl::Status> setup_abort_;
  bool setup_complete_ = false;
  std::set<uint64_t> user_set_;               // U_S
  std::map<uint64_t, SharedKey> mac_keys_;    // user-server keys

  uint64_t iteration_ = 0;
  std::vector<uint64_t> online_;              // O, sorted
  std::map<uint64_t, std::vector<GroupElement>> masked_;
  std::vector<uint64_t> responders_;          // O', sorted
  std::vector<uint64_t> mac_rejected_;
  std::vector<uint64_t> malformed_rejected_;
  OpCounts ops_;
};

}  // namespace seclab

#endif  // SECLAB_PROTOCOL_SERVER_H_
