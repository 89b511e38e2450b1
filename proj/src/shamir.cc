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

#include "seclab/shamir.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "seclab/status.h"

namespace seclab {

absl::StatusOr<std::vector<SecretShare>> ShamirShareWithCoefficients(
    const Scalar& secret, std::span<const Scalar> coefficients,
    std::span<const uint64_t> indices, const mpz_class& q) {
  const size_t t = coefficients.size() + 1;
  if (t > indices.size()) {
    return MakeError(ErrorKind::kThresholdTooLarge,
                     absl::StrCat("threshold ", t, " exceeds ", indices.size(),
                                  " shareholders"));
  }
  std::vector<uint64_t> sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] == 0 || mpz_class(sorted[i]) >= q) {
      return MakeError(ErrorKind::kIndexCollisionModQ,
                       absl::StrCat("index ", sorted[i], " outside [1, q)"));
    }
    if (i > 0 && sorted[i] == sorted[i - 1]) {
      return MakeError(ErrorKind::kDuplicateIndex,
                       absl::StrCat("index ", sorted[i], " repeated"));
    }
  }
  std::vector<SecretShare> shares;
  shares.reserve(indices.size());
  for (uint64_t idx : indices) {
    // Horner evaluation from the highest coefficient down.
    const mpz_class x(idx);
    mpz_class acc = 0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
      acc = Mod(acc * x + it->value, q);
    }
    acc = Mod(acc * x + secret.value, q);
    shares.push_back(SecretShare{idx, Scalar(acc)});
  }
  return shares;
}

absl::StatusOr<std::vector<SecretShare>> ShamirShare(
    const Scalar& secret, std::span<const uint64_t> indices, size_t t,
    const mpz_class& q, Prng& prng) {
  if (t == 0 || t > indices.size()) {
    return MakeError(ErrorKind::kThresholdTooLarge,
                     absl::StrCat("threshold ", t, " invalid for ",
                                  indices.size(), " shareholders"));
  }
  std::vector<Scalar> coefficients;
  coefficients.reserve(t - 1);
  for (size_t i = 1; i < t; ++i) coefficients.emplace_back(prng.Uniform(q));
  return ShamirShareWithCoefficients(secret, coefficients, indices, q);
}

absl::StatusOr<Scalar> ShamirRecon(std::span<const SecretShare> shares,
                                   size_t t, const mpz_class& q) {
  if (t == 0 || shares.size() < t) {
    return MakeError(ErrorKind::kInsufficientShares,
                     absl::StrCat("have ", shares.size(), " shares, need ", t));
  }
  std::vector<SecretShare> sorted(shares.begin(), shares.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.index < b.index; });
  sorted.resize(t);
  std::vector<uint64_t> indices;
  for (const auto& s : sorted) indices.push_back(s.index);
  auto coeffs = LagrangeAtZero(indices, q);
  if (!coeffs.ok()) return coeffs.status();
  mpz_class acc = 0;
  for (size_t i = 0; i < t; ++i) {
    acc = Mod(acc + (*coeffs)[i].value * sorted[i].value.value, q);
  }
  return Scalar(acc);
}

}  // namespace seclab
