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

#ifndef SECLAB_PROTOCOL_MASKING_H_
#define SECLAB_PROTOCOL_MASKING_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "seclab/group_math.h"

namespace seclab {

// Hash input for coordinate m of iteration k: [k, m] canonically encoded.
Bytes IterationTag(uint64_t k, uint64_t coordinate);

// H(k || m), the base every exponent of coordinate m lives on in iteration k.
GroupElement IterationBase(const GroupParams& params, uint64_t k,
                           uint64_t coordinate);

// base^{(x + mask) mod q}.
GroupElement MaskCoordinate(const GroupParams& params, const GroupElement& base,
                            uint64_t x, const Scalar& mask);

// base^{sum of shares mod q}.
GroupElement ZetaCoordinate(const GroupParams& params, const GroupElement& base,
                            std::span<const Scalar> shares);

struct UnmaskResult {
  uint64_t sum = 0;
  uint64_t dlog_steps = 0;
};

// Server-side unmasking of one coordinate: multiplies the masked updates,
// divides by the mask product reconstructed in the exponent from `zetas`
// (t smallest ids), and takes the discrete log below `bound`.
absl::StatusOr<UnmaskResult> UnmaskCoordinate(
    const GroupParams& params, const GroupElement& base,
    std::span<const GroupElement> masked, std::span<const ExponentPoint> zetas,
    size_t t, const mpz_class& bound);

}  // namespace seclab

#endif  // SECLAB_PROTOCOL_MASKING_H_
