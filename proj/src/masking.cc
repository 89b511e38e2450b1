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

#include "seclab/protocol/masking.h"

#include "seclab/encoding.h"

namespace seclab {

Bytes IterationTag(uint64_t k, uint64_t coordinate) {
  FieldWriter w;
  w.AddU64(k).AddU64(coordinate);
  return std::move(w).Finish();
}

GroupElement IterationBase(const GroupParams& params, uint64_t k,
                           uint64_t coordinate) {
  return HashToGroup(params, IterationTag(k, coordinate));
}

GroupElement MaskCoordinate(const GroupParams& params, const GroupElement& base,
                            uint64_t x, const Scalar& mask) {
  return Exp(params, base, ReduceScalar(params, mpz_class(x) + mask.value));
}

GroupElement ZetaCoordinate(const GroupParams& params, const GroupElement& base,
                            std::span<const Scalar> shares) {
  mpz_class sum = 0;
  for (const Scalar& s : shares) sum += s.value;
  return Exp(params, base, ReduceScalar(params, sum));
}

absl::StatusOr<UnmaskResult> UnmaskCoordinate(
    const GroupParams& params, const GroupElement& base,
    std::span<const GroupElement> masked, std::span<const ExponentPoint> zetas,
    size_t t, const mpz_class& bound) {
  auto mask_product = ExponentRecon(zetas, t, params);
  if (!mask_product.ok()) return mask_product.status();
  GroupElement product = Identity();
  for (const GroupElement& e : masked) product = Mul(params, product, e);
  const GroupElement unmasked = Div(params, product, *mask_product);
  auto solver = DlogSolver::Create(params, base, bound);
  if (!solver.ok()) return solver.status();
  auto sum = solver->Solve(unmasked);
  if (!sum.ok()) return sum.status();
  return UnmaskResult{sum->value.get_ui(), solver->steps()};
}

}  // namespace seclab
