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

#include "seclab/protocol/config.h"

#include "absl/strings/str_cat.h"
#include "seclab/status.h"

namespace seclab {

std::string_view ModeName(Mode mode) {
  return mode == Mode::kSemiHonest ? "semi-honest" : "malicious";
}

std::string_view VariantName(Variant variant) {
  return variant == Variant::kBaseline ? "baseline" : "per-iteration-masks";
}

absl::StatusOr<Mode> ParseMode(std::string_view name) {
  if (name == "semi-honest") return Mode::kSemiHonest;
  if (name == "malicious") return Mode::kMalicious;
  return MakeError(ErrorKind::kInvalidConfig, absl::StrCat("unknown mode ", std::string(name)));
}

absl::StatusOr<Variant> ParseVariant(std::string_view name) {
  if (name == "baseline") return Variant::kBaseline;
  if (name == "per-iteration-masks") return Variant::kPerIterationMasks;
  return MakeError(ErrorKind::kInvalidConfig,
                   absl::StrCat("unknown variant ", std::string(name)));
}

absl::Status ProtocolConfig::Validate() const {
  if (n < 1 || t < 1 || t > n) {
    return MakeError(ErrorKind::kInvalidConfig,
                     absl::StrCat("need 1 <= t <= n, got t=", t, " n=", n));
  }
  if (vector_len < 1) {
    return MakeError(ErrorKind::kInvalidConfig, "vector length must be >= 1");
  }
  if (iterations < 1) {
    return MakeError(ErrorKind::kInvalidConfig, "iterations must be >= 1");
  }
  if (input_bits < 1 || input_bits > 32) {
    return MakeError(ErrorKind::kInvalidConfig, "input bits must be in [1, 32]");
  }
  if (masking_group.q < 2) {
    return MakeError(ErrorKind::kInvalidConfig, "masking group not set");
  }
  if (mpz_class(n) >= masking_group.q) {
    return MakeError(ErrorKind::kInvalidConfig,
                     "user ids must stay below q to serve as share indices");
  }
  if (DlogBound() > masking_group.q) {
    return MakeError(ErrorKind::kInvalidConfig,
                     "n * (2^input_bits - 1) must be below q");
  }
  return absl::OkStatus();
}

mpz_class ProtocolConfig::DlogBound() const {
  return mpz_class(n) * mpz_class(MaxInput()) + 1;
}

size_t ProtocolConfig::SecretsPerUser() const {
  return variant == Variant::kBaseline
             ? vector_len
             : static_cast<size_t>(iterations) * vector_len;
}

PartyIdentity MakeIdentity(Prng& prng) {
  PartyIdentity id;
  id.schnorr = SchnorrKeyGen(prng);
  id.multisig = MultisigKeyGen(prng);
  return id;
}

}  // namespace seclab
