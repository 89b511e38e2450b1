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

#include "seclab/bytes.h"

#include <openssl/hmac.h>
#include <openssl/sha.h>

#include <cassert>

#include "seclab/status.h"

namespace seclab {

Digest Sha256(ByteSpan data) {
  Digest out;
  SHA256(data.data(), data.size(), out.data());
  return out;
}

Digest HmacSha256(ByteSpan key, ByteSpan data) {
  Digest out;
  unsigned int len = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(),
       data.size(), out.data(), &len);
  return out;
}

std::string ToHex(ByteSpan data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

absl::StatusOr<Bytes> FromHex(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    return MakeError(ErrorKind::kMalformedRecord, "odd-length hex string");
  }
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  Bytes out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    int hi = nibble(hex[2 * i]);
    int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      return MakeError(ErrorKind::kMalformedRecord, "invalid hex digit");
    }
    out[i] = static_cast<uint8_t>((hi << 4) | lo);
  }
  return out;
}

mpz_class FromBigEndian(ByteSpan data) {
  mpz_class out;
  if (!data.empty()) {
    mpz_import(out.get_mpz_t(), data.size(), 1, 1, 1, 0, data.data());
  }
  return out;
}

Bytes ToBigEndian(const mpz_class& value, size_t width) {
  assert(value >= 0);
  size_t needed = (mpz_sizeinbase(value.get_mpz_t(), 2) + 7) / 8;
  if (value == 0) needed = 0;
  assert(needed <= width);
  Bytes out(width, 0);
  size_t written = 0;
  mpz_export(out.data() + (width - needed), &written, 1, 1, 1, 0,
             value.get_mpz_t());
  return out;
}

size_t ByteWidth(const mpz_class& modulus) {
  return (mpz_sizeinbase(modulus.get_mpz_t(), 2) + 7) / 8;
}

mpz_class Mod(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

mpz_class PowMod(const mpz_class& base, const mpz_class& exponent,
                 const mpz_class& modulus) {
  mpz_class r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(),
           modulus.get_mpz_t());
  return r;
}

mpz_class InvertMod(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  [[maybe_unused]] int ok =
      mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  assert(ok != 0);
  return r;
}

}  // namespace seclab
