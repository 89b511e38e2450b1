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

#ifndef SECLAB_GROUP_MATH_H_
#define SECLAB_GROUP_MATH_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "absl/status/statusor.h"
#include "seclab/bytes.h"

namespace seclab {

// The masking group: the order-q subgroup of Z_p^* for a safe prime
// p = 2q + 1. All masking, unmasking and exponent reconstruction happens here.
struct GroupParams {
  mpz_class p;
  mpz_class q;
  mpz_class g;
  int bits = 0;  // bit length of q

  friend bool operator==(const GroupParams& a, const GroupParams& b) {
    return a.p == b.p && a.q == b.q && a.g == b.g && a.bits == b.bits;
  }
};

// Integer in [0, q).
struct Scalar {
  mpz_class value;

  Scalar() = default;
  explicit Scalar(mpz_class v) : value(std::move(v)) {}
  explicit Scalar(unsigned long v) : value(v) {}

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.value == b.value;
  }
};

// Member of the order-q subgroup, stored as its residue in [1, p).
struct GroupElement {
  mpz_class value{1};

  GroupElement() = default;
  explicit GroupElement(mpz_class v) : value(std::move(v)) {}

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.value == b.value;
  }
};

// Validates p = 2q + 1 with p, q prime and g a non-identity element of order q.
absl::StatusOr<GroupParams> MakeGroupParams(const mpz_class& p,
                                            const mpz_class& q,
                                            const mpz_class& g);

// Searches for a safe prime whose q has exactly `bits` bits, testing
// random candidates with 64 Miller-Rabin rounds on both q and 2q + 1. The
// generator is the smallest g >= 2 of order q. Deterministic in `seed`.
// Accepts 4 <= bits <= 256.
absl::StatusOr<GroupParams> GenerateGroup(int bits, uint64_t seed);

// Probabilistic primality with `rounds` Miller-Rabin witnesses drawn from a
// stream seeded by n itself, so the verdict is reproducible.
bool IsProbablePrime(const mpz_class& n, int rounds = 64);

bool IsGroupMember(const GroupParams& params, const mpz_class& value);

GroupElement Identity();
GroupElement Generator(const GroupParams& params);

// Hashes `tag` into the subgroup: (SHA-256(domain || tag [|| ctr]) mod p)^2,
// retrying with a counter byte while the result is 0 or 1.
GroupElement HashToGroup(const GroupParams& params, ByteSpan tag);

GroupElement Exp(const GroupParams& params, const GroupElement& base,
                 const Scalar& e);
GroupElement Mul(const GroupParams& params, const GroupElement& a,
                 const GroupElement& b);
GroupElement Inverse(const GroupParams& params, const GroupElement& a);
GroupElement Div(const GroupParams& params, const GroupElement& a,
                 const GroupElement& b);

Scalar ScalarAdd(const GroupParams& params, const Scalar& a, const Scalar& b);
Scalar ScalarSub(const GroupParams& params, const Scalar& a, const Scalar& b);
Scalar ScalarMul(const GroupParams& params, const Scalar& a, const Scalar& b);
Scalar ReduceScalar(const GroupParams& params, const mpz_class& v);

// Baby-step giant-step table for one base and one search bound. Building it
// costs ceil(sqrt(bound)) group operations; each Solve costs at most as many
// again. Reusing a table across targets with the same base is the point.
class DlogSolver {
 public:
  // bound must satisfy 1 <= bound <= q and ceil(sqrt(bound)) < 2^31.
  static absl::StatusOr<DlogSolver> Create(const GroupParams& params,
                                           const GroupElement& base,
                                           const mpz_class& bound);

  // x in [0, bound) with base^x = target; NotInRange otherwise.
  absl::StatusOr<Scalar> Solve(const GroupElement& target) const;

  // Group operations spent building the table plus all Solve calls so far.
  uint64_t steps() const { return steps_; }

 private:
  DlogSolver() = default;

  bool word_sized_ = false;  // p < 2^63: pure 64-bit arithmetic
  GroupParams params_;
  GroupElement base_;
  mpz_class bound_;
  uint64_t m_ = 0;          // baby-step count
  uint64_t giant_steps_ = 0;
  mpz_class giant_;         // base^{-m}
  std::vector<uint64_t> keys_;  // open addressing; 0 marks an empty slot
  std::vector<uint32_t> values_;
  mutable uint64_t steps_ = 0;

  void Insert(uint64_t key, uint32_t value);
  bool Find(uint64_t key, uint32_t* value) const;
};

// x in [0, bound) with base^x = target.
absl::StatusOr<Scalar> BoundedDlog(const GroupParams& params,
                                   const GroupElement& base,
                                   const GroupElement& target,
                                   const mpz_class& bound);

// x in [0, q) with base^x = target; NoSolution if none exists.
absl::StatusOr<Scalar> FullDlog(const GroupParams& params,
                                const GroupElement& base,
                                const GroupElement& target);

// Lagrange coefficients for evaluating at zero: sum_j coeff[j] * f(idx[j])
// = f(0) for every polynomial of degree < indices.size() over Z_q. The
// result is aligned with `indices`.
absl::StatusOr<std::vector<Scalar>> LagrangeAtZero(
    std::span<const uint64_t> indices, const mpz_class& q);

using ExponentPoint = std::pair<uint64_t, GroupElement>;

// Shamir reconstruction in the exponent: from points (j, base^{f(j)}) returns
// base^{f(0)}, interpolating over the t smallest indices.
absl::StatusOr<GroupElement> ExponentRecon(std::span<const ExponentPoint> points,
                                           size_t t, const GroupParams& params);

}  // namespace seclab

#endif  // SECLAB_GROUP_MATH_H_
