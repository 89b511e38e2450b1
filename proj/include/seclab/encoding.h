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

#ifndef SECLAB_ENCODING_H_
#define SECLAB_ENCODING_H_

#include <cstdint>
#include <string_view>

#include <gmpxx.h>

#include "absl/status/statusor.h"
#include "seclab/bytes.h"

namespace seclab {

// Canonical field-list encoding: each field is a 4-byte big-endian length
// followed by the raw bytes. Lists nest by encoding an inner field list as a
// single field. The same bytes are signed, MACed and sent on the wire.
class FieldWriter {
 public:
  FieldWriter& Add(ByteSpan field);
  FieldWriter& AddString(std::string_view s) { return Add(AsBytes(s)); }
  FieldWriter& AddU64(uint64_t v);
  // Fixed-width big-endian.
  FieldWriter& AddInt(const mpz_class& v, size_t width);

  const Bytes& bytes() const { return out_; }
  Bytes Finish() && { return std::move(out_); }

 private:
  Bytes out_;
};

class FieldReader {
 public:
  explicit FieldReader(ByteSpan data) : data_(data) {}

  absl::StatusOr<ByteSpan> Next();
  absl::StatusOr<uint64_t> NextU64();
  // Fixed-width big-endian; rejects any other width.
  absl::StatusOr<mpz_class> NextInt(size_t width);
  absl::Status ExpectString(std::string_view expected);

  bool done() const { return pos_ == data_.size(); }
  // MalformedMessage if unread bytes remain.
  absl::Status ExpectDone() const;

 private:
  ByteSpan data_;
  size_t pos_ = 0;
};

}  // namespace seclab

#endif  // SECLAB_ENCODING_H_
