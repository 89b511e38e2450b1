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

#ifndef SECLAB_PRNG_H_
#define SECLAB_PRNG_H_

#include <cstdint>
#include <limits>
#include <string_view>

#include <gmpxx.h>

#include "seclab/bytes.h"

namespace seclab {

// Deterministic generator: SHA-256 in counter mode over a 32-byte key.
// Every party owns its own stream, derived from the run seed and a label,
// so a run is reproducible regardless of the order parties are stepped in.
// Satisfies UniformRandomBitGenerator.
class Prng {
 public:
  using result_type = uint64_t;

  explicit Prng(ByteSpan seed_material);
  static Prng FromSeed(uint64_t seed, std::string_view label);

  // Independent child stream; does not advance this one.
  Prng Fork(std::string_view label) const;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  Bytes NextBytes(size_t n);
  // Uniform in [0, bound); bound > 0. Rejection sampling, no modulo bias.
  uint64_t UniformU64(uint64_t bound);
  mpz_class Uniform(const mpz_class& bound);
  // Uniform in [0, 1).
  double UniformDouble();

 private:
  void Refill();

  Digest key_;
  uint64_t counter_ = 0;
  Digest block_{};
  size_t used_ = sizeof(Digest);
};

}  // namespace seclab

#endif  // SECLAB_PRNG_H_
