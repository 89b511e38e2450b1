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

#include <set>
#include <string>

#include "gtest/gtest.h"
#include "seclab/bytes.h"
#include "seclab/encoding.h"
#include "seclab/prng.h"
#include "seclab/status.h"
#include "test_util.h"

namespace seclab {
namespace {

TEST(BytesTest, Sha256KnownAnswer) {
  EXPECT_EQ(ToHex(Sha256(AsBytes("abc"))),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(BytesTest, HmacSha256KnownAnswer) {
  EXPECT_EQ(ToHex(HmacSha256(AsBytes("Jefe"), AsBytes("what do ya want for nothing?"))),
            "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
}

TEST(BytesTest, HexRoundTripAndErrors) {
  const Bytes data = {0x00, 0x01, 0xab, 0xff};
  EXPECT_EQ(ToHex(data), "0001abff");
  ASSERT_OK_AND_ASSIGN(Bytes back, FromHex("0001ABff"));
  EXPECT_EQ(back, data);
  EXPECT_KIND(FromHex("abc"), ErrorKind::kMalformedRecord);
  EXPECT_KIND(FromHex("zz"), ErrorKind::kMalformedRecord);
  ASSERT_OK_AND_ASSIGN(Bytes empty, FromHex(""));
  EXPECT_TRUE(empty.empty());
}

TEST(BytesTest, BigEndianAndWidths) {
  EXPECT_EQ(ToBigEndian(mpz_class(0x0102), 4), (Bytes{0, 0, 1, 2}));
  EXPECT_EQ(FromBigEndian(Bytes{0, 0, 1, 2}), 0x0102);
  EXPECT_EQ(ByteWidth(mpz_class(23)), 1u);
  EXPECT_EQ(ByteWidth(mpz_class(256)), 2u);
  EXPECT_EQ(Mod(mpz_class(-3), mpz_class(11)), 8);
  EXPECT_EQ(InvertMod(mpz_class(2), mpz_class(11)), 6);
}

TEST(PrngTest, DeterministicAndLabelled) {
  Prng a = Prng::FromSeed(1, "x");
  Prng b = Prng::FromSeed(1, "x");
  Prng c = Prng::FromSeed(1, "y");
  Prng d = Prng::FromSeed(2, "x");
  const Bytes ab = a.NextBytes(64);
  EXPECT_EQ(ab, b.NextBytes(64));
  EXPECT_NE(ab, c.NextBytes(64));
  EXPECT_NE(ab, d.NextBytes(64));
}

TEST(PrngTest, ForkDoesNotAdvanceParent) {
  Prng a = Prng::FromSeed(3, "fork");
  Prng b = Prng::FromSeed(3, "fork");
  Prng child = a.Fork("child");
  EXPECT_EQ(a(), b());
  EXPECT_NE(child.NextBytes(16), Prng::FromSeed(3, "fork").NextBytes(16));
}

TEST(PrngTest, UniformStaysInRange) {
  Prng prng = Prng::FromSeed(4, "range");
  std::set<uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const uint64_t v = prng.UniformU64(7);
    ASSERT_LT(v, 7u);
    seen.insert(v);
    const double u = prng.UniformDouble();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(prng.Uniform(mpz_class(1000003)), 1000003);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(EncodingTest, RoundTrip) {
  FieldWriter inner;
  inner.AddU64(5).AddString("x");
  FieldWriter w;
  w.AddString("tag").AddU64(42).AddInt(mpz_class(513), 3).Add(inner.bytes());
  const Bytes bytes = std::move(w).Finish();
  // 4-byte big-endian length prefixes.
  EXPECT_EQ(Bytes(bytes.begin(), bytes.begin() + 7), (Bytes{0, 0, 0, 3, 't', 'a', 'g'}));

  FieldReader r(bytes);
  ASSERT_OK(r.ExpectString("tag"));
  ASSERT_OK_AND_ASSIGN(uint64_t v, r.NextU64());
  EXPECT_EQ(v, 42u);
  ASSERT_OK_AND_ASSIGN(mpz_class i, r.NextInt(3));
  EXPECT_EQ(i, 513);
  ASSERT_OK_AND_ASSIGN(ByteSpan nested, r.Next());
  FieldReader nr(nested);
  ASSERT_OK_AND_ASSIGN(uint64_t five, nr.NextU64());
  EXPECT_EQ(five, 5u);
  ASSERT_OK(nr.ExpectString("x"));
  EXPECT_TRUE(nr.done());
  EXPECT_OK(r.ExpectDone());
}

TEST(EncodingTest, MalformedInputs) {
  FieldWriter w;
  w.AddString("abc").AddInt(mpz_class(7), 2);
  Bytes bytes = w.bytes();
  {
    FieldReader r(bytes);
    EXPECT_KIND(r.ExpectString("abd"), ErrorKind::kMalformedMessage);
  }
  {
    FieldReader r(bytes);
    ASSERT_OK(r.Next());
    EXPECT_KIND(r.NextInt(3), ErrorKind::kMalformedMessage);
  }
  {
    FieldReader r(bytes);
    ASSERT_OK(r.Next());
    EXPECT_KIND(r.ExpectDone(), ErrorKind::kMalformedMessage);
  }
  {
    Bytes truncated(bytes.begin(), bytes.end() - 1);
    FieldReader r(truncated);
    ASSERT_OK(r.Next());
    EXPECT_KIND(r.Next(), ErrorKind::kMalformedMessage);
  }
  {
    FieldReader r(Bytes{0, 0});
    EXPECT_KIND(r.Next(), ErrorKind::kMalformedMessage);
  }
}

TEST(StatusTest, KindsRoundTripThroughNamesAndPayload) {
  for (int i = 0; i <= static_cast<int>(ErrorKind::kDegenerateScale); ++i) {
    const auto kind = static_cast<ErrorKind>(i);
    const std::string name(ErrorKindName(kind));
    EXPECT_EQ(ErrorKindFromName(name), kind) << name;
    absl::Status s = MakeError(kind, "detail");
    EXPECT_FALSE(s.ok());
    EXPECT_EQ(GetErrorKind(s), kind);
    EXPECT_TRUE(HasErrorKind(s, kind));
    EXPECT_EQ(std::string(s.message()), name + ": detail");
  }
  EXPECT_EQ(GetErrorKind(absl::InternalError("x")), std::nullopt);
  EXPECT_EQ(ErrorKindFromName("NoSuchKind"), std::nullopt);
}

}  // namespace
}  // namespace seclab
