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

#include "seclab/protocol/server.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "seclab/protocol/masking.h"
#include "seclab/status.h"

namespace seclab {

Server::Server(ProtocolConfig config, PartyIdentity identity,
               std::shared_ptr<const VerificationKeys> keys, Prng prng)
    : config_(std::move(config)),
      identity_(std::move(identity)),
      keys_(std::move(keys)),
      prng_(std::move(prng)) {
  ka_ = KaGen(prng_);
}

void Server::BeginStep() { ops_ = OpCounts{}; }

std::vector<RoundMessage> Server::ToEach(uint64_t k, int round, MsgType type,
                                         const std::vector<uint64_t>& receivers,
                                         const Bytes& payload) const {
  std::vector<RoundMessage> out;
  out.reserve(receivers.size());
  for (uint64_t j : receivers) {
    RoundMessage msg;
    msg.k = k;
    msg.round = round;
    msg.sender = kServerId;
    msg.receiver = j;
    msg.type = type;
    msg.payload = payload;
    out.push_back(std::move(msg));
  }
  return out;
}

absl::StatusOr<std::vector<RoundMessage>> Server::SetupStep(
    int round, std::span<const RoundMessage> inbox) {
  if (setup_abort_.has_value()) return *setup_abort_;
  BeginStep();
  absl::StatusOr<std::vector<RoundMessage>> out;
  if (round == 1) {
    out = SetupRound1(inbox);
  } else if (round == 2) {
    out = SetupRound2(inbox);
  } else {
    return absl::InvalidArgumentError("server setup has rounds 1 and 2");
  }
  if (!out.ok()) setup_abort_ = out.status();
  return out;
}

absl::StatusOr<std::vector<RoundMessage>> Server::SetupRound1(
    std::span<const RoundMessage> inbox) {
  KeyList list;
  for (const auto& msg : inbox) {
    if (msg.type != MsgType::kKeyAnnounce || user_set_.contains(msg.sender)) {
      continue;
    }
    auto vk = keys_->schnorr.find(msg.sender);
    if (msg.sender == kServerId || vk == keys_->schnorr.end()) continue;
    auto announce = DecodeKeyAnnounce(msg.payload);
    if (!announce.ok()) continue;
    ++ops_.signature_verifications;
    ops_.group_exponentiations += 2;
    if (!SchnorrVerify(vk->second,
                       KeyAnnounceSignedBytes(msg.sender, announce->ka_pk),
                       announce->sig)) {
      continue;  // ignore the message from this user
    }
    if (config_.defenses.mac_updates) {
      auto key = KaAgree(ka_.sk, announce->ka_pk);
      ops_.group_exponentiations += 2;
      if (!key.ok()) continue;
      mac_keys_[msg.sender] = *key;
    }
    user_set_.insert(msg.sender);
    list.users.push_back(KeyListEntry{msg.sender, announce->ka_pk, announce->sig});
  }
  if (user_set_.size() < config_.t) {
    return MakeError(ErrorKind::kAbortTooFewUsers,
                     absl::StrCat("|U_S| = ", user_set_.size(), " < t"));
  }
  std::sort(list.users.begin(), list.users.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  list.server_ka_pk = ka_.pk;
  list.server_sig =
      SchnorrSign(identity_.schnorr, KeyAnnounceSignedBytes(kServerId, ka_.pk));
  ++ops_.group_exponentiations;
  const std::vector<uint64_t> receivers(user_set_.begin(), user_set_.end());
  return ToEach(0, 1, MsgType::kKeyList, receivers, EncodeKeyList(list));
}

absl::StatusOr<std::vector<RoundMessage>> Server::SetupRound2(
    std::span<const RoundMessage> inbox) {
  std::map<uint64_t, std::vector<ShareEnvelope>> batches;
  for (const auto& msg : inbox) {
    if (msg.type != MsgType::kEncShares || !user_set_.contains(msg.sender) ||
        batches.contains(msg.sender)) {
      continue;
    }
    auto batch = DecodeShareBatch(msg.payload);
    if (!batch.ok()) continue;
    batches[msg.sender] = *std::move(batch);
  }
  if (batches.size() < config_.t) {
    return MakeError(ErrorKind::kAbortTooFewUsers,
                     absl::StrCat("shares from ", batches.size(),
                                  " users, need ", config_.t));
  }
  user_set_.clear();
  for (const auto& [i, unused] : batches) user_set_.insert(i);

  std::map<uint64_t, std::vector<ShareEnvelope>> deliveries;
  for (const auto& [i, batch] : batches) {
    for (const auto& envelope : batch) {
      if (!user_set_.contains(envelope.peer)) continue;
      deliveries[envelope.peer].push_back(ShareEnvelope{i, envelope.ct});
    }
  }
  std::vector<RoundMessage> out;
  for (uint64_t j : user_set_) {
    RoundMessage msg;
    msg.round = 2;
    msg.sender = kServerId;
    msg.receiver = j;
    msg.type = MsgType::kShareDelivery;
    msg.payload = EncodeShareBatch(deliveries[j]);
    out.push_back(std::move(msg));
  }
  setup_complete_ = true;
  return out;
}

absl::StatusOr<std::vector<RoundMessage>> Server::CollectRound1(
    uint64_t k, std::span<const RoundMessage> inbox) {
  if (!setup_complete_) {
    return absl::FailedPreconditionError("setup has not completed");
  }
  BeginStep();
  iteration_ = k;
  online_.clear();
  masked_.clear();
  responders_.clear();
  mac_rejected_.clear();
  malformed_rejected_.clear();
  const GroupParams& params = config_.masking_group;
  for (const auto& msg : inbox) {
    if (msg.type != MsgType::kMaskedUpdate || !user_set_.contains(msg.sender) ||
        masked_.contains(msg.sender)) {
      continue;
    }
    if (config_.defenses.mac_updates) {
      const auto& key = mac_keys_.at(msg.sender);
      if (!msg.mac.has_value() ||
          !MacVerify(key.span(), MaskedUpdateMacInput(msg), *msg.mac)) {
        mac_rejected_.push_back(msg.sender);
        continue;
      }
    }
    auto update = DecodeElementVector(msg.payload, config_.vector_len, params);
    bool well_formed = update.ok() && update->k == k;
    if (well_formed) {
      for (const auto& e : update->elements) {
        ++ops_.group_exponentiations;
        if (!IsGroupMember(params, e.value)) {
          well_formed = false;
          break;
        }
      }
    }
    if (!well_formed) {
      malformed_rejected_.push_back(msg.sender);
      continue;
    }
    masked_[msg.sender] = std::move(update->elements);
  }
  for (const auto& [i, unused] : masked_) online_.push_back(i);
  if (online_.size() < config_.t) {
    return MakeError(ErrorKind::kAbortTooFewOnline,
                     absl::StrCat("|O| = ", online_.size(), " < t"));
  }
  return ToEach(k, 1, MsgType::kOnlineSet, online_,
                EncodeOnlineSet(OnlineSet{k, online_}));
}

absl::StatusOr<std::vector<RoundMessage>> Server::CollectRound2(
    uint64_t k, std::span<const RoundMessage> inbox) {
  if (k != iteration_ || online_.empty()) {
    return absl::FailedPreconditionError("round 1 of this iteration missing");
  }
  BeginStep();
  const Bytes signed_bytes = OnlineSetSignedBytes(k, online_);
  const std::set<uint64_t> online(online_.begin(), online_.end());
  std::map<uint64_t, Signature> valid;
  for (const auto& msg : inbox) {
    if (msg.type != MsgType::kSetSignature || !online.contains(msg.sender) ||
        valid.contains(msg.sender)) {
      continue;
    }
    auto decoded = DecodeSetSignature(msg.payload);
    if (!decoded.ok() || decoded->k != k) continue;
    bool ok = false;
    ++ops_.signature_verifications;
    if (config_.defenses.multisig) {
      auto pk = keys_->multisig.find(msg.sender);
      ok = pk != keys_->multisig.end() &&
           MultisigVerifyPartial(pk->second, signed_bytes, decoded->sig);
    } else {
      ops_.group_exponentiations += 2;
      auto pk = keys_->schnorr.find(msg.sender);
      ok = pk != keys_->schnorr.end() &&
           SchnorrVerify(pk->second, signed_bytes, decoded->sig);
    }
    if (ok) valid.emplace(msg.sender, decoded->sig);
  }
  if (valid.size() < config_.t) {
    return MakeError(ErrorKind::kAbortTooFewSignatures,
                     absl::StrCat(valid.size(), " valid signatures, need ",
                                  config_.t));
  }
  if (config_.defenses.multisig) {
    AggregateBundle bundle;
    bundle.k = k;
    std::vector<Signature> partials;
    for (uint64_t j : online_) {
      auto it = valid.find(j);
      if (it == valid.end()) {
        bundle.non_signers.push_back(j);
      } else {
        partials.push_back(it->second);
      }
    }
    SECLAB_ASSIGN_OR_RETURN(bundle.aggregate, MultisigAggregate(partials));
    return ToEach(k, 2, MsgType::kAggregateSignature, online_,
                  EncodeAggregateBundle(bundle));
  }
  SignatureBundle bundle;
  bundle.k = k;
  for (auto& [j, sig] : valid) bundle.sigs.emplace_back(j, sig);
  return ToEach(k, 2, MsgType::kSignatureBundle, online_,
                EncodeSignatureBundle(bundle));
}

absl::StatusOr<std::vector<uint64_t>> Server::Unmask(
    uint64_t k, std::span<const RoundMessage> inbox) {
  if (k != iteration_ || online_.empty()) {
    return absl::FailedPreconditionError("round 1 of this iteration missing");
  }
  BeginStep();
  const GroupParams& params = config_.masking_group;
  const std::set<uint64_t> online(online_.begin(), online_.end());
  std::map<uint64_t, std::vector<GroupElement>> zetas;
  for (const auto& msg : inbox) {
    if (msg.type != MsgType::kZetaShare || !online.contains(msg.sender) ||
        zetas.contains(msg.sender)) {
      continue;
    }
    auto decoded = DecodeElementVector(msg.payload, config_.vector_len, params);
    if (!decoded.ok() || decoded->k != k) continue;
    bool members = true;
    for (const auto& e : decoded->elements) {
      ++ops_.group_exponentiations;
      members = members && IsGroupMember(params, e.value);
    }
    if (members) zetas[msg.sender] = std::move(decoded->elements);
  }
  for (const auto& [i, unused] : zetas) responders_.push_back(i);
  if (responders_.size() < config_.t) {
    return MakeError(ErrorKind::kAbortTooFewResponders,
                     absl::StrCat("|O'| = ", responders_.size(), " < t"));
  }
  std::vector<uint64_t> sums;
  for (size_t m = 0; m < config_.vector_len; ++m) {
    std::vector<GroupElement> masked;
    for (uint64_t i : online_) masked.push_back(masked_.at(i)[m]);
    std::vector<ExponentPoint> points;
    for (const auto& [j, z] : zetas) points.emplace_back(j, z[m]);
    auto result = UnmaskCoordinate(params, IterationBase(params, k, m), masked,
                                   points, config_.t, config_.DlogBound());
    ops_.group_exponentiations += config_.t;
    if (!result.ok()) return result.status();
    ops_.dlog_steps += result->dlog_steps;
    sums.push_back(result->sum);
  }
  return sums;
}

}  // namespace seclab
