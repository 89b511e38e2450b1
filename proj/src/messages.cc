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

#include "seclab/protocol/messages.h"

#include <array>

#include "absl/strings/str_cat.h"
#include "seclab/encoding.h"
#include "seclab/status.h"

namespace seclab {
namespace {

constexpr std::array<std::pair<MsgType, std::string_view>, 10> kTypeNames = {{
    {MsgType::kKeyAnnounce, "KeyAnnounce"},
    {MsgType::kKeyList, "KeyList"},
    {MsgType::kEncShares, "EncShares"},
    {MsgType::kShareDelivery, "ShareDelivery"},
    {MsgType::kMaskedUpdate, "MaskedUpdate"},
    {MsgType::kOnlineSet, "OnlineSet"},
    {MsgType::kSetSignature, "SetSignature"},
    {MsgType::kSignatureBundle, "SignatureBundle"},
    {MsgType::kAggregateSignature, "AggregateSignature"},
    {MsgType::kZetaShare, "ZetaShare"},
}};

Bytes EncodeIds(const std::vector<uint64_t>& ids) {
  FieldWriter w;
  for (uint64_t id : ids) w.AddU64(id);
  return std::move(w).Finish();
}

absl::StatusOr<std::vector<uint64_t>> DecodeIds(ByteSpan data) {
  FieldReader r(data);
  std::vector<uint64_t> ids;
  while (!r.done()) {
    SECLAB_ASSIGN_OR_RETURN(uint64_t id, r.NextU64());
    ids.push_back(id);
  }
  return ids;
}

absl::StatusOr<Signature> NextSignature(FieldReader& r) {
  SECLAB_ASSIGN_OR_RETURN(ByteSpan raw, r.Next());
  return Signature::Parse(raw);
}

// k followed by a nested list of raw fields.
absl::StatusOr<std::pair<uint64_t, std::vector<ByteSpan>>> DecodeKeyedList(
    ByteSpan payload) {
  FieldReader r(payload);
  SECLAB_ASSIGN_OR_RETURN(uint64_t k, r.NextU64());
  SECLAB_ASSIGN_OR_RETURN(ByteSpan list, r.Next());
  SECLAB_RETURN_IF_ERROR(r.ExpectDone());
  FieldReader inner(list);
  std::vector<ByteSpan> items;
  while (!inner.done()) {
    SECLAB_ASSIGN_OR_RETURN(ByteSpan item, inner.Next());
    items.push_back(item);
  }
  return std::make_pair(k, std::move(items));
}

}  // namespace

std::string_view MsgTypeName(MsgType type) {
  for (const auto& [t, name] : kTypeNames) {
    if (t == type) return name;
  }
  return "Unknown";
}

absl::StatusOr<MsgType> ParseMsgType(std::string_view name) {
  for (const auto& [t, n] : kTypeNames) {
    if (n == name) return t;
  }
  return MakeError(ErrorKind::kMalformedMessage,
                   absl::StrCat("unknown message type ", std::string(name)));
}

Bytes EncodeKeyAnnounce(const KeyAnnounce& msg) {
  FieldWriter w;
  w.AddInt(msg.ka_pk, kAuxElementBytes).Add(msg.sig.Serialize());
  return std::move(w).Finish();
}

absl::StatusOr<KeyAnnounce> DecodeKeyAnnounce(ByteSpan payload) {
  FieldReader r(payload);
  KeyAnnounce msg;
  SECLAB_ASSIGN_OR_RETURN(msg.ka_pk, r.NextInt(kAuxElementBytes));
  SECLAB_ASSIGN_OR_RETURN(msg.sig, NextSignature(r));
  SECLAB_RETURN_IF_ERROR(r.ExpectDone());
  return msg;
}

Bytes KeyAnnounceSignedBytes(uint64_t party, const mpz_class& ka_pk) {
  FieldWriter w;
  w.AddString("key-announce").AddU64(party).AddInt(ka_pk, kAuxElementBytes);
  return std::move(w).Finish();
}

Bytes EncodeKeyList(const KeyList& msg) {
  FieldWriter entries;
  for (const auto& e : msg.users) {
    FieldWriter entry;
    entry.AddU64(e.id).AddInt(e.ka_pk, kAuxElementBytes).Add(e.sig.Serialize());
    entries.Add(entry.bytes());
  }
  FieldWriter w;
  w.Add(entries.bytes())
      .AddInt(msg.server_ka_pk, kAuxElementBytes)
      .Add(msg.server_sig.Serialize());
  return std::move(w).Finish();
}

absl::StatusOr<KeyList> DecodeKeyList(ByteSpan payload) {
  FieldReader r(payload);
  KeyList msg;
  SECLAB_ASSIGN_OR_RETURN(ByteSpan entries, r.Next());
  SECLAB_ASSIGN_OR_RETURN(msg.server_ka_pk, r.NextInt(kAuxElementBytes));
  SECLAB_ASSIGN_OR_RETURN(msg.server_sig, NextSignature(r));
  SECLAB_RETURN_IF_ERROR(r.ExpectDone());
  FieldReader er(entries);
  while (!er.done()) {
    SECLAB_ASSIGN_OR_RETURN(ByteSpan raw, er.Next());
    FieldReader entry(raw);
    KeyListEntry e;
    SECLAB_ASSIGN_OR_RETURN(e.id, entry.NextU64());
    SECLAB_ASSIGN_OR_RETURN(e.ka_pk, entry.NextInt(kAuxElementBytes));
    SECLAB_ASSIGN_OR_RETURN(e.sig, NextSignature(entry));
    SECLAB_RETURN_IF_ERROR(entry.ExpectDone());
    msg.users.push_back(std::move(e));
  }
  return msg;
}

Bytes EncodeShareBatch(const std::vector<ShareEnvelope>& entries) {
  FieldWriter list;
  for (const auto& e : entries) {
    FieldWriter entry;
    entry.AddU64(e.peer).Add(e.ct.nonce).Add(e.ct.body);
    list.Add(entry.bytes());
  }
  FieldWriter w;
  w.Add(list.bytes());
  return std::move(w).Finish();
}

absl::StatusOr<std::vector<ShareEnvelope>> DecodeShareBatch(ByteSpan payload) {
  FieldReader r(payload);
  SECLAB_ASSIGN_OR_RETURN(ByteSpan list, r.Next());
  SECLAB_RETURN_IF_ERROR(r.ExpectDone());
  FieldReader lr(list);
  std::vector<ShareEnvelope> out;
  while (!lr.done()) {
    SECLAB_ASSIGN_OR_RETURN(ByteSpan raw, lr.Next());
    FieldReader entry(raw);
    ShareEnvelope e;
    SECLAB_ASSIGN_OR_RETURN(e.peer, entry.NextU64());
    SECLAB_ASSIGN_OR_RETURN(ByteSpan nonce, entry.Next());
    SECLAB_ASSIGN_OR_RETURN(ByteSpan body, entry.Next());
    SECLAB_RETURN_IF_ERROR(entry.ExpectDone());
    e.ct.nonce.assign(nonce.begin(), nonce.end());
    e.ct.body.assign(body.begin(), body.end());
    out.push_back(std::move(e));
  }
  return out;
}

Bytes ShareContext(uint64_t sender, uint64_t receiver) {
  FieldWriter w;
  w.AddString("share").AddU64(sender).AddU64(receiver).AddString("setup").AddU64(2);
  return std::move(w).Finish();
}

Bytes EncodeScalars(const std::vector<Scalar>& values, const GroupParams& params) {
  const size_t width = ByteWidth(params.q);
  FieldWriter w;
  for (const Scalar& v : values) w.AddInt(v.value, width);
  return std::move(w).Finish();
}

absl::StatusOr<std::vector<Scalar>> DecodeScalars(ByteSpan data, size_t count,
                                                  const GroupParams& params) {
  const size_t width = ByteWidth(params.q);
  FieldReader r(data);
  std::vector<Scalar> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    SECLAB_ASSIGN_OR_RETURN(mpz_class v, r.NextInt(width));
    if (v >= params.q) {
      return MakeError(ErrorKind::kMalformedMessage, "share value not below q");
    }
    out.emplace_back(std::move(v));
  }
  SECLAB_RETURN_IF_ERROR(r.ExpectDone());
  return out;
}

Bytes EncodeElementVector(uint64_t k, const std::vector<GroupElement>& elements,
                          const GroupParams& params) {
  const size_t width = ByteWidth(params.p);
  FieldWriter list;
  for (const GroupElement& e : elements) list.AddInt(e.value, width);
  FieldWriter w;
  w.AddU64(k).Add(list.bytes());
  return std::move(w).Finish();
}

absl::StatusOr<ElementVector> DecodeElementVector(ByteSpan payload,
                                                  size_t expected_len,
                                                  const GroupParams& params) {
  SECLAB_ASSIGN_OR_RETURN(auto keyed, DecodeKeyedList(payload));
  if (expected_len != kAnyLength && keyed.second.size() != expected_len) {
    return MakeError(ErrorKind::kMalformedMessage,
                     absl::StrCat("expected ", expected_len, " elements, got ",
                                  keyed.second.size()));
  }
  const size_t width = ByteWidth(params.p);
  ElementVector out;
  out.k = keyed.first;
  for (ByteSpan raw : keyed.second) {
    if (raw.size() != width) {
      return MakeError(ErrorKind::kMalformedMessage, "bad element width");
    }
    mpz_class v = FromBigEndian(raw);
    if (v < 1 || v >= params.p) {
      return MakeError(ErrorKind::kMalformedMessage, "element outside [1, p)");
    }
    out.elements.emplace_back(std::move(v));
  }
  return out;
}

Bytes MaskedUpdateMacInput(const RoundMessage& msg) {
  FieldWriter w;
  w.AddString("masked-update")
      .AddU64(msg.k)
      .AddU64(static_cast<uint64_t>(msg.round))
      .AddU64(msg.sender)
      .Add(msg.payload);
  return std::move(w).Finish();
}

Bytes EncodeOnlineSet(const OnlineSet& msg) {
  FieldWriter w;
  w.AddU64(msg.k).Add(EncodeIds(msg.ids));
  return std::move(w).Finish();
}

absl::StatusOr<OnlineSet> DecodeOnlineSet(ByteSpan payload) {
  FieldReader r(payload);
  OnlineSet msg;
  SECLAB_ASSIGN_OR_RETURN(msg.k, r.NextU64());
  SECLAB_ASSIGN_OR_RETURN(ByteSpan ids, r.Next());
  SECLAB_RETURN_IF_ERROR(r.ExpectDone());
  SECLAB_ASSIGN_OR_RETURN(msg.ids, DecodeIds(ids));
  return msg;
}

Bytes OnlineSetSignedBytes(uint64_t k, const std::vector<uint64_t>& ids) {
  FieldWriter w;
  w.AddString("online-set").AddU64(k).Add(EncodeIds(ids));
  return std::move(w).Finish();
}

Bytes EncodeSetSignature(const SetSignature& msg) {
  FieldWriter w;
  w.AddU64(msg.k).Add(msg.sig.Serialize());
  return std::move(w).Finish();
}

absl::StatusOr<SetSignature> DecodeSetSignature(ByteSpan payload) {
  FieldReader r(payload);
  SetSignature msg;
  SECLAB_ASSIGN_OR_RETURN(msg.k, r.NextU64());
  SECLAB_ASSIGN_OR_RETURN(msg.sig, NextSignature(r));
  SECLAB_RETURN_IF_ERROR(r.ExpectDone());
  return msg;
}

Bytes EncodeSignatureBundle(const SignatureBundle& msg) {
  FieldWriter list;
  for (const auto& [id, sig] : msg.sigs) {
    FieldWriter entry;
    entry.AddU64(id).Add(sig.Serialize());
    list.Add(entry.bytes());
  }
  FieldWriter w;
  w.AddU64(msg.k).Add(list.bytes());
  return std::move(w).Finish();
}

absl::StatusOr<SignatureBundle> DecodeSignatureBundle(ByteSpan payload) {
  SECLAB_ASSIGN_OR_RETURN(auto keyed, DecodeKeyedList(payload));
  SignatureBundle msg;
  msg.k = keyed.first;
  for (ByteSpan raw : keyed.second) {
    FieldReader entry(raw);
    SECLAB_ASSIGN_OR_RETURN(uint64_t id, entry.NextU64());
    SECLAB_ASSIGN_OR_RETURN(Signature sig, NextSignature(entry));
    SECLAB_RETURN_IF_ERROR(entry.ExpectDone());
    msg.sigs.emplace_back(id, std::move(sig));
  }
  return msg;
}

Bytes EncodeAggregateBundle(const AggregateBundle& msg) {
  FieldWriter w;
  w.AddU64(msg.k).Add(EncodeIds(msg.non_signers)).Add(msg.aggregate.Serialize());
  return std::move(w).Finish();
}

absl::StatusOr<AggregateBundle> DecodeAggregateBundle(ByteSpan payload) {
  FieldReader r(payload);
  AggregateBundle msg;
  SECLAB_ASSIGN_OR_RETURN(msg.k, r.NextU64());
  SECLAB_ASSIGN_OR_RETURN(ByteSpan ids, r.Next());
  SECLAB_ASSIGN_OR_RETURN(msg.aggregate, NextSignature(r));
  SECLAB_RETURN_IF_ERROR(r.ExpectDone());
  SECLAB_ASSIGN_OR_RETURN(msg.non_signers, DecodeIds(ids));
  return msg;
}

absl::Status ValidatePayload(MsgType type, ByteSpan payload) {
  switch (type) {
    case MsgType::kKeyAnnounce:
      return DecodeKeyAnnounce(payload).status();
    case MsgType::kKeyList:
      return DecodeKeyList(payload).status();
    case MsgType::kEncShares:
    case MsgType::kShareDelivery:
      return DecodeShareBatch(payload).status();
    case MsgType::kMaskedUpdate:
    case MsgType::kZetaShare:
      return DecodeKeyedList(payload).status();
    case MsgType::kOnlineSet:
      return DecodeOnlineSet(payload).status();
    case MsgType::kSetSignature:
      return DecodeSetSignature(payload).status();
    case MsgType::kSignatureBundle:
      return DecodeSignatureBundle(payload).status();
    case MsgType::kAggregateSignature:
      return DecodeAggregateBundle(payload).status();
  }
  return MakeError(ErrorKind::kMalformedMessage, "unknown message type");
}

}  // namespace seclab
