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

#ifndef SECLAB_PROTOCOL_MESSAGES_H_
#define SECLAB_PROTOCOL_MESSAGES_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "seclab/bytes.h"
#include "seclab/crypto.h"
#include "seclab/group_math.h"

namespace seclab {

enum class MsgType : uint8_t {
  kKeyAnnounce,         // setup r1, user -> server
  kKeyList,             // setup r1, server -> user
  kEncShares,           // setup r2, user -> server
  kShareDelivery,       // setup r2, server -> user
  kMaskedUpdate,        // aggregation r1, user -> server
  kOnlineSet,           // aggregation r1, server -> user
  kSetSignature,        // aggregation r2, user -> server
  kSignatureBundle,     // aggregation r2, server -> user
  kAggregateSignature,  // aggregation r2, server -> user (multisig defense)
  kZetaShare,           // aggregation r3, user -> server
};

std::string_view MsgTypeName(MsgType type);
absl::StatusOr<MsgType> ParseMsgType(std::string_view name);

// One wire message. `k` is 0 during setup. Party id 0 is the server.
struct RoundMessage {
  uint64_t k = 0;
  int round = 0;
  uint64_t sender = 0;
  uint64_t receiver = 0;
  MsgType type = MsgType::kKeyAnnounce;
  Bytes payload;
  std::optional<MacTag> mac;

  size_t WireSize() const {
    return payload.size() + (mac.has_value() ? mac->bytes.size() : 0);
  }
  friend bool operator==(const RoundMessage&, const RoundMessage&) = default;
};

// Payload schemas. Every payload is a canonical field list (see encoding.h);
// nested lists are encoded as a single field holding an inner field list.

// KeyAnnounce: [ka_pk (32), signature]
struct KeyAnnounce {
  mpz_class ka_pk;
  Signature sig;
};
Bytes EncodeKeyAnnounce(const KeyAnnounce& msg);
absl::StatusOr<KeyAnnounce> DecodeKeyAnnounce(ByteSpan payload);
// Bytes covered by a KeyAnnounce signature: ["key-announce", party, ka_pk].
Bytes KeyAnnounceSignedBytes(uint64_t party, const mpz_class& ka_pk);

// KeyList: [[[id, ka_pk, signature]...], server_ka_pk, server_signature]
struct KeyListEntry {
  uint64_t id = 0;
  mpz_class ka_pk;
  Signature sig;
};
struct KeyList {
  std::vector<KeyListEntry> users;
  mpz_class server_ka_pk;
  Signature server_sig;
};
Bytes EncodeKeyList(const KeyList& msg);
absl::StatusOr<KeyList> DecodeKeyList(ByteSpan payload);

// EncShares / ShareDelivery: [[[peer, nonce, body]...]]. `peer` is the
// receiver in EncShares and the original sender in ShareDelivery.
struct ShareEnvelope {
  uint64_t peer = 0;
  Ciphertext ct;
};
Bytes EncodeShareBatch(const std::vector<ShareEnvelope>& entries);
absl::StatusOr<std::vector<ShareEnvelope>> DecodeShareBatch(ByteSpan payload);

// AE associated data: ["share", sender, receiver, "setup", 2].
Bytes ShareContext(uint64_t sender, uint64_t receiver);
// Share plaintext: [[value (q-width)]...]
Bytes EncodeScalars(const std::vector<Scalar>& values, const GroupParams& params);
absl::StatusOr<std::vector<Scalar>> DecodeScalars(ByteSpan data, size_t count,
                                                  const GroupParams& params);

// MaskedUpdate / ZetaShare: [k, [element (p-width)]...]
struct ElementVector {
  uint64_t k = 0;
  std::vector<GroupElement> elements;
};
Bytes EncodeElementVector(uint64_t k, const std::vector<GroupElement>& elements,
                          const GroupParams& params);
// Checks widths, count and range [1, p); subgroup membership is left to the
// caller. kAnyLength skips the count check.
inline constexpr size_t kAnyLength = static_cast<size_t>(-1);
absl::StatusOr<ElementVector> DecodeElementVector(ByteSpan payload,
                                                  size_t expected_len,
                                                  const GroupParams& params);
// Bytes covered by a round-1 MAC: ["masked-update", k, round, sender, payload].
Bytes MaskedUpdateMacInput(const RoundMessage& msg);

// OnlineSet: [k, [id...]]
struct OnlineSet {
  uint64_t k = 0;
  std::vector<uint64_t> ids;
};
Bytes EncodeOnlineSet(const OnlineSet& msg);
absl::StatusOr<OnlineSet> DecodeOnlineSet(ByteSpan payload);
// Bytes signed in round 2: ["online-set", k, [id...]].
Bytes OnlineSetSignedBytes(uint64_t k, const std::vector<uint64_t>& ids);

// SetSignature: [k, signature]
struct SetSignature {
  uint64_t k = 0;
  Signature sig;
};
Bytes EncodeSetSignature(const SetSignature& msg);
absl::StatusOr<SetSignature> DecodeSetSignature(ByteSpan payload);

// SignatureBundle: [k, [[id, signature]...]]
struct SignatureBundle {
  uint64_t k = 0;
  std::vector<std::pair<uint64_t, Signature>> sigs;
};
Bytes EncodeSignatureBundle(const SignatureBundle& msg);
absl::StatusOr<SignatureBundle> DecodeSignatureBundle(ByteSpan payload);

// AggregateSignature: [k, [non-signer id...], aggregate]. Signers are the
// online set minus the listed ids, so the message is constant-size when
// everyone online signed.
struct AggregateBundle {
  uint64_t k = 0;
  std::vector<uint64_t> non_signers;
  Signature aggregate;
};
Bytes EncodeAggregateBundle(const AggregateBundle& msg);
absl::StatusOr<AggregateBundle> DecodeAggregateBundle(ByteSpan payload);

// Decodes any payload by type, for transcript validation.
absl::Status ValidatePayload(MsgType type, ByteSpan payload);

}  // namespace seclab

#endif  // SECLAB_PROTOCOL_MESSAGES_H_
