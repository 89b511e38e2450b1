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

#ifndef SECLAB_PROTOCOL_USER_H_
#define SECLAB_PROTOCOL_USER_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "seclab/crypto.h"
#include "seclab/group_math.h"
#include "seclab/prng.h"
#include "seclab/protocol/config.h"
#include "seclab/protocol/messages.h"

namespace seclab {

// Work a party performed during its most recent step.
struct OpCounts {
  uint64_t signature_verifications = 0;
  uint64_t group_exponentiations = 0;
  uint64_t dlog_steps = 0;
};

// User state machine for the one-time setup (three rounds) and the
// per-iteration aggregation (three rounds, the second only in malicious
// mode). Each step consumes the messages the server sent in the previous
// round and returns this user's outbox.
class User {
 public:
  User(uint64_t id, ProtocolConfig config, PartyIdentity identity,
       std::shared_ptr<const VerificationKeys> keys, Prng prng);

  uint64_t id() const { return id_; }

  // Round 1 announces a signed key-agreement key. Round 2 checks the relayed
  // key list, derives pairwise keys, samples the secrets and sends them
  // Shamir-shared and encrypted. Round 3 decrypts the shares it was sent.
  // An abort here is permanent.
  absl::StatusOr<std::vector<RoundMessage>> SetupStep(
      int round, std::span<const RoundMessage> inbox);

  bool setup_complete() const { return setup_complete_; }

  // Per coordinate m: H(k || m)^{(x[m] + mask[m]) mod q}.
  absl::StatusOr<std::vector<GroupElement>> ComputeMaskedUpdate(
      uint64_t k, std::span<const uint64_t> input);
  absl::StatusOr<RoundMessage> AggregationRound1(uint64_t k,
                                                 std::span<const uint64_t> input);

  // Malicious mode only: checks O against U_i and signs (O, k).
  absl::StatusOr<Signature> SignOnlineSet(const std::vector<uint64_t>& online,
                                          uint64_t k);
  absl::StatusOr<std::vector<RoundMessage>> AggregationRound2(
      uint64_t k, std::span<const RoundMessage> inbox);

  // Per coordinate m: H(k || m)^{sum_{j in O} r_{j,i}[m]}.
  absl::StatusOr<std::vector<GroupElement>> ComputeZeta(
      uint64_t k, const std::vector<uint64_t>& online);
  // Semi-honest: inbox holds the OnlineSet. Malicious: inbox holds the
  // signature bundle (or aggregate) for the set received in round 2.
  absl::StatusOr<std::vector<RoundMessage>> AggregationRound3(
      uint64_t k, std::span<const RoundMessage> inbox);

  const std::set<uint64_t>& user_set() const { return user_set_; }
  const std::vector<Scalar>& secrets() const { return secrets_; }
  // The mask applied to coordinate m in iteration k.
  const Scalar& MaskFor(uint64_t k, size_t coordinate) const;
  const std::map<uint64_t, std::vector<Scalar>>& received_shares() const {
    return shares_;
  }
  const OpCounts& last_step_ops() const { return ops_; }

  // Test seam: replaces the secrets sampled in setup round 2. Must be called
  // before that round.
  void OverrideSecretsForTesting(std::vector<Scalar> secrets) {
    secret_override_ = std::move(secrets);
  }

 private:
  absl::Status Advance(uint64_t k, int round);
  absl::StatusOr<std::vector<RoundMessage>> SetupRound1();
  absl::StatusOr<std::vector<RoundMessage>> SetupRound2(
      std::span<const RoundMessage> inbox);
  absl::StatusOr<std::vector<RoundMessage>> SetupRound3(
      std::span<const RoundMessage> inbox);
  absl::StatusOr<size_t> SecretRow(uint64_t k) const;
  absl::Status CheckOnlineSet(const std::vector<uint64_t>& online) const;
  absl::Status VerifyBundle(uint64_t k, const RoundMessage& msg);
  RoundMessage ToServer(uint64_t k, int round, MsgType type, Bytes payload) const;

  uint64_t id_;
  ProtocolConfig config_;
  PartyIdentity identity_;
  std::shared_ptr<const VerificationKeys> keys_;
  Prng prng_;

  std::pair<uint64_t, int> cursor_{0, 0};
  std::optional<absl::Status> setup_abort_;
  bool setup_complete_ = false;

  KeyPair ka_;
  std::map<uint64_t, SharedKey> peer_keys_;  // ek_{i,j} over U_i^1
  std::optional<SharedKey> server_key_;
  std::set<uint64_t> user_set_1_;            // U_i^1
  std::set<uint64_t> user_set_;              // U_i
  std::vector<Scalar> secrets_;              // row-major K x L or L
  std::optional<std::vector<Scalar>> secret_override_;
  std::map<uint64_t, std::vector<Scalar>> shares_;  // r_{j,i}

  std::vector<uint64_t> online_;  // O of the current iteration
  OpCounts ops_;
};

}  // namespace seclab

#endif  // SECLAB_PROTOCOL_USER_H_
