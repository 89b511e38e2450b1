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

#ifndef SECLAB_BYTES_H_
#define SECLAB_BYTES_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "absl/status/statusor.h"

namespace seclab {

using Bytes = std::vector<uint8_t>;
using ByteSpan = std::span<const uint8_t>;
using Digest = std::array<uint8_t, 32>;

// Name of the 256-bit hash used everywhere a byte-oriented hash is needed.
inline constexpr std::string_view kHashIdentity = "SHA-256";

Digest Sha256(ByteSpan data);
Digest HmacSha256(ByteSpan key, ByteSpan data);

inline ByteSpan AsBytes(std::string_view s) {
  return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}
inline Bytes ToBytes(std::string_view s) {
  return Bytes(s.begin(), s.end());
}

std::string ToHex(ByteSpan data);
absl::StatusOr<Bytes> FromHex(std::string_view hex);

// Big-endian integer conversions. `width` pads on the left; the value must
// fit in `width` bytes.
mpz_class FromBigEndian(ByteSpan data);
Bytes ToBigEndian(const mpz_class& value, size_t width);
size_t ByteWidth(const mpz_class& modulus);

// Non-negative residue of `a` modulo `m`.
mpz_class Mod(const mpz_class& a, const mpz_class& m);
mpz_class PowMod(const mpz_class& base, const mpz_class& exponent,
                 const mpz_class& modulus);
// Requires gcd(a, m) = 1.
mpz_class InvertMod(const mpz_class& a, const mpz_class& m);

}  // namespace seclab

#endif  // SECLAB_BYTES_H_
