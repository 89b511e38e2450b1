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

#ifndef SECLAB_PROTOCOL_CONFIG_H_
#define SECLAB_PROTOCOL_CONFIG_H_

#include <cstdint>
#include <map>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "seclab/crypto.h"
#include "seclab/group_math.h"
#include "seclab/prng.h"

namespace seclab {

enum class Mode { kSemiHonest, kMalicious };
enum class Variant { kBaseline, kPerIterationMasks };

std::string_view ModeName(Mode mode);
std::string_view VariantName(Variant variant);
absl::StatusOr<Mode> ParseMode(std::string_view name);
absl::StatusOr<Variant> ParseVariant(std::string_view name);

struct Defenses {
  bool mac_updates = false;  // MAC round-1 updates under a user-server key
  bool multisig = false;     // aggregate round-2 signatures into one
};

struct ProtocolConfig {
  uint32_t n = 3;              // users, ids 1..n
  uint32_t t = 2;              // threshold
  uint32_t iterations = 1;     // K
  uint32_t vector_len = 1;     // L
  uint32_t input_bits = 8;     // inputs lie in [0, 2^input_bits)
  Mode mode = Mode::kSemiHonest;
  Variant variant = Variant::kBaseline;
  Defenses defenses;
  GroupParams masking_group;
  uint64_t seed = 0;

  // 1 <= t <= n, L >= 1, K >= 1, n * (2^input_bits - 1) < q.
  absl::Status Validate() const;

  // Exclusive bound on any aggregate: n * (2^input_bits - 1) + 1.
  mpz_class DlogBound() const;
  uint64_t MaxInput() const { return (uint64_t{1} << input_bits) - 1; }
  // Secrets each user shares during setup: L, or K * L with fresh masks per
  // iteration.
  size_t SecretsPerUser() const;
};

// Signing material a party is provisioned with before setup.
struct PartyIdentity {
  SigningKeyPair schnorr;
  SigningKeyPair multisig;
};

// Verification keys of every party, distributed out of band. Key 0 is the
// server.
struct VerificationKeys {
  std::map<uint64_t, mpz_class> schnorr;
  std::map<uint64_t, mpz_class> multisig;
};

inline constexpr uint64_t kServerId = 0;

PartyIdentity MakeIdentity(Prng& prng);

}  // namespace seclab

#endif  // SECLAB_PROTOCOL_CONFIG_H_
