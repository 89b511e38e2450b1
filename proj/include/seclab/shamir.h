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

#ifndef SECLAB_SHAMIR_H_
#define SECLAB_SHAMIR_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "seclab/group_math.h"
#include "seclab/prng.h"

namespace seclab {

// One evaluation point f(index) of a sharing polynomial over Z_q.
struct SecretShare {
  uint64_t index = 0;
  Scalar value;

  friend bool operator==(const SecretShare& a, const SecretShare& b) {
    return a.index == b.index && a.value == b.value;
  }
};

// Shares `secret` with a uniformly random degree-(t-1) polynomial, one share
// per index. Indices must be distinct, positive and below q.
absl::StatusOr<std::vector<SecretShare>> ShamirShare(
    const Scalar& secret, std::span<const uint64_t> indices, size_t t,
    const mpz_class& q, Prng& prng);

// Same as ShamirShare with caller-chosen coefficients a_1..a_{t-1}.
absl::StatusOr<std::vector<SecretShare>> ShamirShareWithCoefficients(
    const Scalar& secret, std::span<const Scalar> coefficients,
    std::span<const uint64_t> indices, const mpz_class& q);

// f(0) of the polynomial through the t smallest-index shares.
absl::StatusOr<Scalar> ShamirRecon(std::span<const SecretShare> shares,
                                   size_t t, const mpz_class& q);

}  // namespace seclab

#endif  // SECLAB_SHAMIR_H_
