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

#include "seclab/encoding.h"

#include "seclab/status.h"

namespace seclab {

FieldWriter& FieldWriter::Add(ByteSpan field) {
  const uint32_t len = static_cast<uint32_t>(field.size());
  for (int shift = 24; shift >= 0; shift -= 8) {
    out_.push_back(static_cast<uint8_t>(len >> shift));
  }
  out_.insert(out_.end(), field.begin(), field.end());
  return *this;
}

FieldWriter& FieldWriter::AddU64(uint64_t v) {
  uint8_t buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<uint8_t>(v >> (56 - 8 * i));
  return Add(buf);
}

FieldWriter& FieldWriter::AddInt(const mpz_class& v, size_t width) {
  return Add(ToBigEndian(v, width));
}

absl::StatusOr<ByteSpan> FieldReader::Next() {
  if (data_.size() - pos_ < 4) {
    return MakeError(ErrorKind::kMalformedMessage, "truncated length prefix");
  }
  uint32_t len = 0;
  for (int i = 0; i < 4; ++i) len = (len << 8) | data_[pos_ + i];
  pos_ += 4;
  if (data_.size() - pos_ < len) {
    return MakeError(ErrorKind::kMalformedMessage, "truncated field");
  }
  ByteSpan field = data_.subspan(pos_, len);
  pos_ += len;
  return field;
}

absl::StatusOr<uint64_t> FieldReader::NextU64() {
  auto field = Next();
  if (!field.ok()) return field.status();
  if (field->size() != 8) {
    return MakeError(ErrorKind::kMalformedMessage, "expected 8-byte integer");
  }
  uint64_t v = 0;
  for (uint8_t b : *field) v = (v << 8) | b;
  return v;
}

absl::StatusOr<mpz_class> FieldReader::NextInt(size_t width) {
  auto field = Next();
  if (!field.ok()) return field.status();
  if (field->size() != width) {
    return MakeError(ErrorKind::kMalformedMessage, "unexpected integer width");
  }
  return FromBigEndian(*field);
}

absl::Status FieldReader::ExpectString(std::string_view expected) {
  auto field = Next();
  if (!field.ok()) return field.status();
  if (std::string_view(reinterpret_cast<const char*>(field->data()),
                       field->size()) != expected) {
    return MakeError(ErrorKind::kMalformedMessage, "unexpected label");
  }
  return absl::OkStatus();
}

absl::Status FieldReader::ExpectDone() const {
  if (!done()) {
    return MakeError(ErrorKind::kMalformedMessage, "trailing bytes");
  }
  return absl::OkStatus();
}

}  // namespace seclab
