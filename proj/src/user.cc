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

#include "seclab/protocol/user.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "seclab/protocol/masking.h"
#include "seclab/shamir.h"
#include "seclab/status.h"

namespace seclab {

User::User(uint64_t id, ProtocolConfig config, PartyIdentity identity,
           std::shared_ptr<const VerificationKeys> keys, Prng prng)
    : id_(id),
      config_(std::move(config)),
      identity_(std::move(identity)),
      keys_(std::move(keys)),
      prng_(std::move(prng)) {}

absl::Status User::Advance(uint64_t k, int round) {
  const std::pair<uint64_t, int> next{k, round};
  if (next <= cursor_) {
    return absl::FailedPreconditionError(
        absl::StrCat("user ", id_, " stepped backwards to (", k, ", ", round,
                     ")"));
  }
  cursor_ = next;
  ops_ = OpCounts{};
  return absl::OkStatus();
}

RoundMessage User::ToServer(uint64_t k, int round, MsgType type,
                            Bytes payload) const {
  RoundMessage msg;
  msg.k = k;
  msg.round = round;
  msg.sender = id_;
  msg.receiver = kServerId;
  msg.type = type;
  msg.payload = std::move(payload);
  return msg;
}

absl::StatusOr<std::vector<RoundMessage>> User::SetupStep(
    int round, std::span<const RoundMessage> inbox) {
  if (setup_abort_.has_value()) return *setup_abort_;
  if (round < 1 || round > 3) {
    return absl::InvalidArgumentError("setup has rounds 1 to 3");
  }
  SECLAB_RETURN_IF_ERROR(Advance(0, round));
  absl::StatusOr<std::vector<RoundMessage>> out =
      round == 1 ? SetupRound1()
                 : (round == 2 ? SetupRound2(inbox) : SetupRound3(inbox));
  if (!out.ok()) setup_abort_ = out.status();
  return out;
}

absl::StatusOr<std::vector<RoundMessage>> User::SetupRound1() {
  ka_ = KaGen(prng_);
  ++ops_.group_exponentiations;
  KeyAnnounce announce;
  announce.ka_pk = ka_.pk;
  announce.sig = SchnorrSign(identity_.schnorr, KeyAnnounceSignedBytes(id_, ka_.pk));
  ++ops_.group_exponentiations;
  return std::vector<RoundMessage>{
      ToServer(0, 1, MsgType::kKeyAnnounce, EncodeKeyAnnounce(announce))};
}

absl::StatusOr<std::vector<RoundMessage>> User::SetupRound2(
    std::span<const RoundMessage> inbox) {
  const RoundMessage* relay = nullptr;
  for (const auto& msg : inbox) {
    if (msg.type == MsgType::kKeyList && msg.sender == kServerId) relay = &msg;
  }
  if (relay == nullptr) {
    return MakeError(ErrorKind::kAbortTooFewUsers, "no key list received");
  }
  SECLAB_ASSIGN_OR_RETURN(KeyList list, DecodeKeyList(relay->payload));

  auto verify = [&](uint64_t party, const mpz_class& pk, const Signature& sig) {
    ops_.signature_verifications++;
    ops_.group_exponentiations += 2;
    auto it = keys_->schnorr.find(party);
    return it != keys_->schnorr.end() &&
           SchnorrVerify(it->second, KeyAnnounceSignedBytes(party, pk), sig);
  };

  // Any bad signature in the relay means the server is corrupt.
  if (!verify(kServerId, list.server_ka_pk, list.server_sig)) {
    return MakeError(ErrorKind::kAbortBadServerSignature,
                     "server key signature invalid");
  }
  for (const auto& entry : list.users) {
    if (!verify(entry.id, entry.ka_pk, entry.sig)) {
      return MakeError(ErrorKind::kAbortBadServerSignature,
                       absl::StrCat("relayed key of user ", entry.id,
                                    " failed verification"));
    }
  }
  if (config_.defenses.mac_updates) {
    auto key = KaAgree(ka_.sk, list.server_ka_pk);
    ops_.group_exponentiations += 2;
    if (!key.ok()) {
      return MakeError(ErrorKind::kAbortBadServerSignature,
                       "server key-agreement key invalid");
    }
    server_key_ = *key;
  }
  for (const auto& entry : list.users) {
    auto key = KaAgree(ka_.sk, entry.ka_pk);
    ops_.group_exponentiations += 2;
    if (!key.ok()) continue;
    user_set_1_.insert(entry.id);
    peer_keys_[entry.id] = *key;
  }
  if (user_set_1_.size() < config_.t) {
    return MakeError(ErrorKind::kAbortTooFewUsers,
                     absl::StrCat("|U_i^1| = ", user_set_1_.size(), " < t"));
  }

  const size_t count = config_.SecretsPerUser();
  if (secret_override_.has_value()) {
    if (secret_override_->size() != count) {
      return absl::InvalidArgumentError("secret override has the wrong shape");
    }
    secrets_ = *secret_override_;
  } else {
    secrets_.clear();
    for (size_t c = 0; c < count; ++c) {
      secrets_.emplace_back(prng_.Uniform(config_.masking_group.q));
    }
  }

  const std::vector<uint64_t> indices(user_set_1_.begin(), user_set_1_.end());
  // plaintexts[j] collects share j of every secret, in secret order.
  std::map<uint64_t, std::vector<Scalar>> plaintexts;
  for (const Scalar& secret : secrets_) {
    SECLAB_ASSIGN_OR_RETURN(
        auto shares, ShamirShare(secret, indices, config_.t,
                                 config_.masking_group.q, prng_));
    for (auto& share : shares) {
      plaintexts[share.index].push_back(std::move(share.value));
    }
  }
  std::vector<ShareEnvelope> batch;
  for (uint64_t j : indices) {
    const Bytes plaintext = EncodeScalars(plaintexts[j], config_.masking_group);
    batch.push_back(ShareEnvelope{
        j, AeEncrypt(peer_keys_[j], plaintext, ShareContext(id_, j), prng_)});
  }
  return std::vector<RoundMessage>{
      ToServer(0, 2, MsgType::kEncShares, EncodeShareBatch(batch))};
}

absl::StatusOr<std::vector<RoundMessage>> User::SetupRound3(
    std::span<const RoundMessage> inbox) {
  std::vector<ShareEnvelope> delivered;
  for (const auto& msg : inbox) {
    if (msg.type != MsgType::kShareDelivery || msg.sender != kServerId) continue;
    SECLAB_ASSIGN_OR_RETURN(delivered, DecodeShareBatch(msg.payload));
  }
  if (delivered.size() < config_.t) {
    return MakeError(ErrorKind::kAbortTooFewUsers,
                     absl::StrCat("received shares from ", delivered.size(),
                                  " users, need ", config_.t));
  }
  const size_t count = config_.SecretsPerUser();
  for (const auto& envelope : delivered) {
    auto key = peer_keys_.find(envelope.peer);
    if (key == peer_keys_.end() || shares_.contains(envelope.peer)) continue;
    auto plaintext =
        AeDecrypt(key->second, envelope.ct, ShareContext(envelope.peer, id_));
    if (!plaintext.ok()) continue;  // ignored, per the setup rules
    auto values = DecodeScalars(*plaintext, count, config_.masking_group);
    if (!values.ok()) continue;
    shares_[envelope.peer] = *std::move(values);
    user_set_.insert(envelope.peer);
  }
  if (user_set_.size() < config_.t) {
    return MakeError(ErrorKind::kAbortTooFewUsers,
                     absl::StrCat("|U_i^2| = ", user_set_.size(), " < t"));
  }
  setup_complete_ = true;
  return std::vector<RoundMessage>{};
}

absl::StatusOr<size_t> User::SecretRow(uint64_t k) const {
  if (config_.variant == Variant::kBaseline) return 0;
  if (k < 1 || k > config_.iterations) {
    return MakeError(ErrorKind::kIterationOutOfRange,
                     absl::StrCat("iteration ", k, " outside the ",
                                  config_.iterations,
                                  " iterations prepared at setup"));
  }
  return static_cast<size_t>(k - 1);
}

const Scalar& User::MaskFor(uint64_t k, size_t coordinate) const {
  auto row = SecretRow(k);
  return secrets_.at(row.value_or(0) * config_.vector_len + coordinate);
}

absl::StatusOr<std::vector<GroupElement>> User::ComputeMaskedUpdate(
    uint64_t k, std::span<const uint64_t> input) {
  if (!setup_complete_) {
    return absl::FailedPreconditionError("setup has not completed");
  }
  if (input.size() != config_.vector_len) {
    return MakeError(ErrorKind::kInputOutOfRange,
                     absl::StrCat("expected ", config_.vector_len,
                                  " coordinates, got ", input.size()));
  }
  SECLAB_ASSIGN_OR_RETURN(size_t row, SecretRow(k));
  const GroupParams& params = config_.masking_group;
  std::vector<GroupElement> out;
  out.reserve(input.size());
  for (size_t m = 0; m < input.size(); ++m) {
    if (input[m] > config_.MaxInput()) {
      return MakeError(ErrorKind::kInputOutOfRange,
                       absl::StrCat("coordinate ", m, " = ", input[m],
                                    " outside [0, 2^", config_.input_bits, ")"));
    }
    const Scalar& mask = secrets_[row * config_.vector_len + m];
    out.push_back(MaskCoordinate(params, IterationBase(params, k, m), input[m], mask));
    ++ops_.group_exponentiations;
  }
  return out;
}

absl::StatusOr<RoundMessage> User::AggregationRound1(
    uint64_t k, std::span<const uint64_t> input) {
  SECLAB_RETURN_IF_ERROR(Advance(k, 1));
  SECLAB_ASSIGN_OR_RETURN(auto elements, ComputeMaskedUpdate(k, input));
  RoundMessage msg =
      ToServer(k, 1, MsgType::kMaskedUpdate,
               EncodeElementVector(k, elements, config_.masking_group));
  if (config_.defenses.mac_updates) {
    msg.mac = MacCompute(server_key_->span(), MaskedUpdateMacInput(msg));
  }
  online_.clear();
  return msg;
}

absl::Status User::CheckOnlineSet(const std::vector<uint64_t>& online) const {
  for (uint64_t j : online) {
    if (!user_set_.contains(j)) {
      return MakeError(ErrorKind::kAbortSetNotSubset,
                       absl::StrCat("online user ", j, " is not in U_", id_));
    }
  }
  if (online.size() < config_.t) {
    return MakeError(ErrorKind::kAbortTooFewOnline,
                     absl::StrCat("|O| = ", online.size(), " < t"));
  }
  return absl::OkStatus();
}

absl::StatusOr<Signature> User::SignOnlineSet(const std::vector<uint64_t>& online,
                                              uint64_t k) {
  SECLAB_RETURN_IF_ERROR(CheckOnlineSet(online));
  const Bytes msg = OnlineSetSignedBytes(k, online);
  if (config_.defenses.multisig) return MultisigSign(identity_.multisig, msg);
  ++ops_.group_exponentiations;
  return SchnorrSign(identity_.schnorr, msg);
}

absl::StatusOr<std::vector<RoundMessage>> User::AggregationRound2(
    uint64_t k, std::span<const RoundMessage> inbox) {
  SECLAB_RETURN_IF_ERROR(Advance(k, 2));
  std::optional<OnlineSet> online;
  for (const auto& msg : inbox) {
    if (msg.type == MsgType::kOnlineSet && msg.sender == kServerId) {
      SECLAB_ASSIGN_OR_RETURN(online, DecodeOnlineSet(msg.payload));
    }
  }
  if (!online.has_value() || online->k != k) {
    return MakeError(ErrorKind::kMalformedMessage,
                     "no online set for this iteration");
  }
  online_ = online->ids;
  SECLAB_ASSIGN_OR_RETURN(Signature sig, SignOnlineSet(online_, k));
  return std::vector<RoundMessage>{ToServer(
      k, 2, MsgType::kSetSignature, EncodeSetSignature(SetSignature{k, sig}))};
}

absl::Status User::VerifyBundle(uint64_t k, const RoundMessage& msg) {
  const Bytes signed_bytes = OnlineSetSignedBytes(k, online_);
  const std::set<uint64_t> online(online_.begin(), online_.end());
  if (msg.type == MsgType::kAggregateSignature) {
    SECLAB_ASSIGN_OR_RETURN(AggregateBundle bundle,
                            DecodeAggregateBundle(msg.payload));
    std::set<uint64_t> signers = online;
    for (uint64_t j : bundle.non_signers) signers.erase(j);
    if (bundle.k != k || signers.size() < config_.t) {
      return MakeError(ErrorKind::kAbortTooFewSignatures,
                       absl::StrCat(signers.size(), " signers, need ", config_.t));
    }
    std::vector<mpz_class> pks;
    for (uint64_t j : signers) {
      auto it = keys_->multisig.find(j);
      if (it == keys_->multisig.end()) {
        return MakeError(ErrorKind::kAbortBadAggregate,
                         absl::StrCat("no multisig key for ", j));
      }
      pks.push_back(it->second);
    }
    VerifyStats stats;
    const bool ok = MultisigVerify(pks, signed_bytes, bundle.aggregate, &stats);
    ops_.signature_verifications += stats.equation_checks;
    if (!ok) {
      return MakeError(ErrorKind::kAbortBadAggregate,
                       "aggregate signature failed verification");
    }
    return absl::OkStatus();
  }
  if (msg.type != MsgType::kSignatureBundle) {
    return MakeError(ErrorKind::kAbortTooFewSignatures, "no signature bundle");
  }
  SECLAB_ASSIGN_OR_RETURN(SignatureBundle bundle,
                          DecodeSignatureBundle(msg.payload));
  std::set<uint64_t> valid;
  if (bundle.k == k) {
    for (const auto& [j, sig] : bundle.sigs) {
      if (!online.contains(j) || valid.contains(j)) continue;
      auto it = keys_->schnorr.find(j);
      if (it == keys_->schnorr.end()) continue;
      ++ops_.signature_verifications;
      ops_.group_exponentiations += 2;
      if (SchnorrVerify(it->second, signed_bytes, sig)) valid.insert(j);
    }
  }
  if (valid.size() < config_.t) {
    return MakeError(ErrorKind::kAbortTooFewSignatures,
                     absl::StrCat(valid.size(), " valid signatures, need ",
                                  config_.t));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<GroupElement>> User::ComputeZeta(
    uint64_t k, const std::vector<uint64_t>& online) {
  SECLAB_ASSIGN_OR_RETURN(size_t row, SecretRow(k));
  const GroupParams& params = config_.masking_group;
  std::vector<GroupElement> out;
  out.reserve(config_.vector_len);
  for (size_t m = 0; m < config_.vector_len; ++m) {
    std::vector<Scalar> summands;
    summands.reserve(online.size());
    for (uint64_t j : online) {
      auto it = shares_.find(j);
      if (it == shares_.end()) {
        return MakeError(ErrorKind::kAbortSetNotSubset,
                         absl::StrCat("holding no share from user ", j));
      }
      summands.push_back(it->second[row * config_.vector_len + m]);
    }
    out.push_back(ZetaCoordinate(params, IterationBase(params, k, m), summands));
    ++ops_.group_exponentiations;
  }
  return out;
}

absl::StatusOr<std::vector<RoundMessage>> User::AggregationRound3(
    uint64_t k, std::span<const RoundMessage> inbox) {
  SECLAB_RETURN_IF_ERROR(Advance(k, 3));
  if (config_.mode == Mode::kMalicious) {
    const RoundMessage* bundle = nullptr;
    for (const auto& msg : inbox) {
      if (msg.sender == kServerId && (msg.type == MsgType::kSignatureBundle ||
                                      msg.type == MsgType::kAggregateSignature)) {
        bundle = &msg;
      }
    }
    if (bundle == nullptr || online_.empty()) {
      return MakeError(ErrorKind::kAbortTooFewSignatures,
                       "no signatures received");
    }
    SECLAB_RETURN_IF_ERROR(VerifyBundle(k, *bundle));
  } else {
    std::optional<OnlineSet> online;
    for (const auto& msg : inbox) {
      if (msg.type == MsgType::kOnlineSet && msg.sender == kServerId) {
        SECLAB_ASSIGN_OR_RETURN(online, DecodeOnlineSet(msg.payload));
      }
    }
    if (!online.has_value() || online->k != k) {
      return MakeError(ErrorKind::kMalformedMessage,
                       "no online set for this iteration");
    }
    online_ = online->ids;
    SECLAB_RETURN_IF_ERROR(CheckOnlineSet(online_));
  }
  SECLAB_ASSIGN_OR_RETURN(auto zeta, ComputeZeta(k, online_));
  return std::vector<RoundMessage>{
      ToServer(k, 3, MsgType::kZetaShare,
               EncodeElementVector(k, zeta, config_.masking_group))};
}

}  // namespace seclab
