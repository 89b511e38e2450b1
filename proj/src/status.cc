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

#include "seclab/status.h"

#include <array>
#include <string>
#include <utility>

#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"

namespace seclab {
namespace {

constexpr char kPayloadUrl[] = "type.seclab/error_kind";

struct KindInfo {
  ErrorKind kind;
  std::string_view name;
  absl::StatusCode code;
};

constexpr std::array kKinds = {
    KindInfo{ErrorKind::kNotInRange, "NotInRange", absl::StatusCode::kOutOfRange},
    KindInfo{ErrorKind::kNoSolution, "NoSolution", absl::StatusCode::kNotFound},
    KindInfo{ErrorKind::kDuplicateIndex, "DuplicateIndex",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kIndexCollisionModQ, "IndexCollisionModQ",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kInsufficientShares, "InsufficientShares",
             absl::StatusCode::kFailedPrecondition},
    KindInfo{ErrorKind::kInvalidGroupParams, "InvalidGroupParams",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kThresholdTooLarge, "ThresholdTooLarge",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kInvalidPublicKey, "InvalidPublicKey",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kAuthFailure, "AuthFailure",
             absl::StatusCode::kUnauthenticated},
    KindInfo{ErrorKind::kSchemeMismatch, "SchemeMismatch",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kInputOutOfRange, "InputOutOfRange",
             absl::StatusCode::kOutOfRange},
    KindInfo{ErrorKind::kInvalidConfig, "InvalidConfig",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kMalformedMessage, "MalformedMessage",
             absl::StatusCode::kDataLoss},
    KindInfo{ErrorKind::kIterationOutOfRange, "IterationOutOfRange",
             absl::StatusCode::kOutOfRange},
    KindInfo{ErrorKind::kAbortTooFewUsers, "AbortTooFewUsers",
             absl::StatusCode::kAborted},
    KindInfo{ErrorKind::kAbortBadServerSignature, "AbortBadServerSignature",
             absl::StatusCode::kAborted},
    KindInfo{ErrorKind::kAbortTooFewOnline, "AbortTooFewOnline",
             absl::StatusCode::kAborted},
    KindInfo{ErrorKind::kAbortSetNotSubset, "AbortSetNotSubset",
             absl::StatusCode::kAborted},
    KindInfo{ErrorKind::kAbortTooFewSignatures, "AbortTooFewSignatures",
             absl::StatusCode::kAborted},
    KindInfo{ErrorKind::kAbortBadAggregate, "AbortBadAggregate",
             absl::StatusCode::kAborted},
    KindInfo{ErrorKind::kAbortTooFewResponders, "AbortTooFewResponders",
             absl::StatusCode::kAborted},
    KindInfo{ErrorKind::kInfeasibleRate, "InfeasibleRate",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kMalformedRecord, "MalformedRecord",
             absl::StatusCode::kDataLoss},
    KindInfo{ErrorKind::kMissingMessage, "MissingMessage",
             absl::StatusCode::kNotFound},
    KindInfo{ErrorKind::kDegenerateScale, "DegenerateScale",
             absl::StatusCode::kFailedPrecondition},
};

const KindInfo& Lookup(ErrorKind kind) {
  for (const auto& info : kKinds) {
    if (info.kind == kind) return info;
  }
  return kKinds.front();
}

}  // namespace

std::string_view ErrorKindName(ErrorKind kind) { return Lookup(kind).name; }

std::optional<ErrorKind> ErrorKindFromName(std::string_view name) {
  for (const auto& info : kKinds) {
    if (info.name == name) return info.kind;
  }
  return std::nullopt;
}

absl::Status MakeError(ErrorKind kind, std::string_view message) {
  const KindInfo& info = Lookup(kind);
  absl::Status status(info.code, absl::StrCat(std::string(info.name), ": ", std::string(message)));
  status.SetPayload(kPayloadUrl, absl::Cord(std::string(info.name)));
  return status;
}

std::optional<ErrorKind> GetErrorKind(const absl::Status& status) {
  auto payload = status.GetPayload(kPayloadUrl);
  if (!payload.has_value()) return std::nullopt;
  return ErrorKindFromName(std::string(*payload));
}

}  // namespace seclab
