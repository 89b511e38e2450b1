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

#include "seclab/prng.h"

#include <cstring>

namespace seclab {
namespace {

void AppendU64(Bytes& out, uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<uint8_t>(v >> shift));
  }
}

}  // namespace

Prng::Prng(ByteSpan seed_material) : key_(Sha256(seed_material)) {}

Prng Prng::FromSeed(uint64_t seed, std::string_view label) {
  Bytes material = ToBytes("seclab/prng/v1");
  AppendU64(material, seed);
  material.insert(material.end(), label.begin(), label.end());
  return Prng(material);
}

Prng Prng::Fork(std::string_view label) const {
  Bytes material(key_.begin(), key_.end());
  material.push_back(0xff);
  material.insert(material.end(), label.begin(), label.end());
  return Prng(material);
}

void Prng::Refill() {
  Bytes input(key_.begin(), key_.end());
  AppendU64(input, counter_++);
  block_ = Sha256(input);
  used_ = 0;
}

Bytes Prng::NextBytes(size_t n) {
  Bytes out;
  out.reserve(n);
  while (out.size() < n) {
    if (used_ == block_.size()) Refill();
    size_t take = std::min(n - out.size(), block_.size() - used_);
    out.insert(out.end(), block_.begin() + used_, block_.begin() + used_ + take);
    used_ += take;
  }
  return out;
}

Prng::result_type Prng::operator()() {
  Bytes b = NextBytes(8);
  uint64_t v = 0;
  for (uint8_t byte : b) v = (v << 8) | byte;
  return v;
}

uint64_t Prng::UniformU64(uint64_t bound) {
  // Largest multiple of bound that fits; values at or above it are rejected.
  const uint64_t limit = max() - (max() % bound + 1) % bound;
  while (true) {
    uint64_t v = (*this)();
    if (v <= limit) return v % bound;
  }
}

mpz_class Prng::Uniform(const mpz_class& bound) {
  const size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  const size_t bytes = (bits + 7) / 8;
  const unsigned excess = static_cast<unsigned>(bytes * 8 - bits);
  while (true) {
    Bytes raw = NextBytes(bytes);
    raw[0] &= static_cast<uint8_t>(0xff >> excess);
    mpz_class v = FromBigEndian(raw);
    if (v < bound) return v;
  }
}

double Prng::UniformDouble() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

}  // namespace seclab
