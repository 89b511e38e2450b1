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

#ifndef SECLAB_STATUS_H_
#define SECLAB_STATUS_H_

#include <optional>
#include <string_view>

#include "absl/status/status.h"

namespace seclab {

// Every failure and abort condition the library can report. Each kind maps
// onto one absl::StatusCode and is attached to the status as a payload so
// callers can branch on the precise condition.
enum class ErrorKind {
  // group-math
  kNotInRange,
  kNoSolution,
  kDuplicateIndex,
  kIndexCollisionModQ,
  kInsufficientShares,
  kInvalidGroupParams,
  // crypto-suite
  kThresholdTooLarge,
  kInvalidPublicKey,
  kAuthFailure,
  kSchemeMismatch,
  // protocol-core
  kInputOutOfRange,
  kInvalidConfig,
  kMalformedMessage,
  kIterationOutOfRange,
  kAbortTooFewUsers,
  kAbortBadServerSignature,
  kAbortTooFewOnline,
  kAbortSetNotSubset,
  kAbortTooFewSignatures,
  kAbortBadAggregate,
  kAbortTooFewResponders,
  // sim-harness
  kInfeasibleRate,
  kMalformedRecord,
  // attack-engine
  kMissingMessage,
  kDegenerateScale,
};

std::string_view ErrorKindName(ErrorKind kind);
std::optional<ErrorKind> ErrorKindFromName(std::string_view name);

absl::Status MakeError(ErrorKind kind, std::string_view message);

// Returns the kind attached by MakeError, or nullopt for foreign statuses.
std::optional<ErrorKind> GetErrorKind(const absl::Status& status);

inline bool HasErrorKind(const absl::Status& status, ErrorKind kind) {
  return GetErrorKind(status) == kind;
}

}  // namespace seclab

// Propagates a non-OK status out of the enclosing function.
#define SECLAB_RETURN_IF_ERROR(expr)               \
  do {                                             \
    ::absl::Status seclab_status_ = (expr);        \
    if (!seclab_status_.ok()) return seclab_status_; \
  } while (false)

#define SECLAB_CONCAT_INNER_(a, b) a##b
#define SECLAB_CONCAT_(a, b) SECLAB_CONCAT_INNER_(a, b)

// Unwraps a StatusOr into `lhs`, returning the status on failure.
#define SECLAB_ASSIGN_OR_RETURN(lhs, rexpr) \
  SECLAB_ASSIGN_OR_RETURN_IMPL_(SECLAB_CONCAT_(seclab_statusor_, __LINE__), lhs, rexpr)

#define SECLAB_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                                  \
  if (!statusor.ok()) return statusor.status();             \
  lhs = std::move(statusor).value()

#endif  // SECLAB_STATUS_H_
