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

#ifndef SECLAB_TESTS_TEST_UTIL_H_
#define SECLAB_TESTS_TEST_UTIL_H_

#include <optional>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gtest/gtest.h"
#include "seclab/group_math.h"
#include "seclab/status.h"

namespace seclab::testing {

inline const absl::Status& StatusOf(const absl::Status& s) { return s; }
template <typename T>
const absl::Status& StatusOf(const absl::StatusOr<T>& s) {
  return s.status();
}

template <typename T>
std::optional<ErrorKind> KindOf(const T& result) {
  return GetErrorKind(StatusOf(result));
}

// p = 23, q = 11, g = 2: the worked instance used throughout the examples.
inline GroupParams TinyGroup() {
  return MakeGroupParams(mpz_class(23), mpz_class(11), mpz_class(2)).value();
}

// A fixed 40-bit group shared by the slower tests.
inline const GroupParams& Group40() {
  static const GroupParams params = GenerateGroup(40, 1).value();
  return params;
}

}  // namespace seclab::testing

#define SECLAB_CONCAT_INNER(a, b) a##b
#define SECLAB_CONCAT(a, b) SECLAB_CONCAT_INNER(a, b)

#define ASSERT_OK(expr) \
  ASSERT_TRUE(::seclab::testing::StatusOf(expr).ok()) << ::seclab::testing::StatusOf(expr)
#define EXPECT_OK(expr) \
  EXPECT_TRUE(::seclab::testing::StatusOf(expr).ok()) << ::seclab::testing::StatusOf(expr)

#define ASSERT_OK_AND_ASSIGN(lhs, expr)                     \
  auto SECLAB_CONCAT(result_, __LINE__) = (expr);           \
  ASSERT_OK(SECLAB_CONCAT(result_, __LINE__));              \
  lhs = *std::move(SECLAB_CONCAT(result_, __LINE__))

#define EXPECT_KIND(expr, kind) \
  EXPECT_EQ(::seclab::testing::KindOf(expr), std::optional<::seclab::ErrorKind>(kind))

#endif  // SECLAB_TESTS_TEST_UTIL_H_
