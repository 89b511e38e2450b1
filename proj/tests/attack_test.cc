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

#include <cmath>
#include <map>
#include <vector>

#include "gtest/gtest.h"
#include "seclab/attack/attack.h"
#include "seclab/attack/linear_model.h"
#include "seclab/protocol/masking.h"
#include "seclab/sim/simulation.h"
#include "test_util.h"

namespace seclab {
namespace {

using ::seclab::testing::Group40;
using ::seclab::testing::TinyGroup;

RoundMessage MaskedUpdate(const GroupParams& params, uint64_t user, uint64_t k,
                          const std::vector<unsigned long>& exponents) {
  std::vector<GroupElement> elements;
  for (size_t m = 0; m < exponents.size(); ++m) {
    elements.push_back(
        Exp(params, IterationBase(params, k, m), Scalar(mpz_class(exponents[m]))));
  }
  RoundMessage msg;
  msg.k = k;
  msg.round = 1;
  msg.sender = user;
  msg.receiver = kServerId;
  msg.type = MsgType::kMaskedUpdate;
  msg.payload = EncodeElementVector(k, elements, params);
  return msg;
}

Transcript Of(std::vector<RoundMessage> msgs) {
  Transcript t;
  uint64_t step = 0;
  for (auto& m : msgs) t.records.push_back({++step, std::move(m)});
  return t;
}

ProtocolConfig Config(uint32_t n, uint32_t t, uint32_t k, uint32_t l, uint32_t bits,
                      const GroupParams& group, uint64_t seed) {
  ProtocolConfig c;
  c.n = n;
  c.t = t;
  c.iterations = k;
  c.vector_len = l;
  c.input_bits = bits;
  c.masking_group = group;
  c.seed = seed;
  return c;
}

AttackReport Attack(const RunOutcome& out) {
  return EvaluateAttack(out.report.config.masking_group, out.transcript,
                        out.report.config.vector_len, out.report.inputs,
                        AllPairs(out.report.config.iterations))
      .value();
}

// ---- Extraction.

TEST(ExtractTest, HandExampleAndIdentity) {
  const GroupParams params = TinyGroup();
  RoundMessage msg = MaskedUpdate(params, 1, 1, {7, 0});
  EXPECT_EQ(ExtractExponent(params, msg, 1, 0).value(), Scalar(7ul));
  EXPECT_EQ(ExtractExponent(params, msg, 1, 1).value(), Scalar(0ul));
  // With base 2 directly: 2^7 = 13.
  EXPECT_EQ(FullDlog(params, GroupElement(mpz_class(2)), GroupElement(mpz_class(13))).value(),
            Scalar(7ul));
}

TEST(ExtractTest, RoundTripsMaskedUpdates) {
  const GroupParams params = TinyGroup();
  Prng prng = Prng::FromSeed(5, "extract");
  for (int trial = 0; trial < 100; ++trial) {
    const uint64_t x = prng.UniformU64(4);
    const Scalar r(mpz_class(static_cast<unsigned long>(prng.UniformU64(11))));
    const uint64_t k = 1 + prng.UniformU64(5);
    RoundMessage msg;
    msg.k = k;
    msg.round = 1;
    msg.type = MsgType::kMaskedUpdate;
    msg.payload = EncodeElementVector(
        k, {MaskCoordinate(params, IterationBase(params, k, 0), x, r)}, params);
    const mpz_class expected = (mpz_class(static_cast<unsigned long>(x)) + r.value) % 11;
    EXPECT_EQ(ExtractExponent(params, msg, k, 0).value(), Scalar(expected));
  }
}

TEST(ExtractTest, RoundTripsAtFortyBits) {
  const GroupParams& params = Group40();
  Prng prng = Prng::FromSeed(6, "extract");
  for (int trial = 0; trial < 5; ++trial) {
    const uint64_t x = prng.UniformU64(256);
    const Scalar r(prng.Uniform(params.q));
    RoundMessage msg;
    msg.k = 2;
    msg.round = 1;
    msg.type = MsgType::kMaskedUpdate;
    msg.payload = EncodeElementVector(
        2, {MaskCoordinate(params, IterationBase(params, 2, 0), x, r)}, params);
    EXPECT_EQ(ExtractExponent(params, msg, 2, 0).value(),
              ReduceScalar(params, mpz_class(static_cast<unsigned long>(x)) + r.value));
  }
}

TEST(ExtractTest, MalformedElementHasNoSolution) {
  const GroupParams params = TinyGroup();
  RoundMessage msg = MaskedUpdate(params, 1, 1, {3});
  // 5 is a non-residue mod 23, outside the order-11 subgroup.
  msg.payload = EncodeElementVector(1, {GroupElement(mpz_class(5))}, params);
  EXPECT_KIND(ExtractExponent(params, msg, 1, 0), ErrorKind::kNoSolution);
}

// ---- Differences.

TEST(DifferenceTest, BaselineMaskCancels) {
  const GroupParams params = TinyGroup();
  // x = 3 then 5 under r = 4: exponents 7 and 9.
  Transcript t = Of({MaskedUpdate(params, 1, 1, {7}), MaskedUpdate(params, 1, 2, {9})});
  EXPECT_EQ(RecoverDifference(params, t, 1, 0, 1, 2).value(), Scalar(2ul));
  EXPECT_EQ(RecoverDifference(params, t, 1, 0, 2, 2).value(), Scalar(0ul));
}

TEST(DifferenceTest, FreshMasksHideTheDifference) {
  const GroupParams params = TinyGroup();
  // r = 4 then 10: exponents 7 and (5 + 10) mod 11 = 4.
  Transcript t = Of({MaskedUpdate(params, 1, 1, {7}), MaskedUpdate(params, 1, 2, {4})});
  EXPECT_EQ(RecoverDifference(params, t, 1, 0, 1, 2).value(), Scalar(8ul));
}

TEST(DifferenceTest, MissingMessage) {
  const GroupParams params = TinyGroup();
  Transcript t = Of({MaskedUpdate(params, 1, 1, {7})});
  EXPECT_KIND(RecoverDifference(params, t, 1, 0, 1, 2), ErrorKind::kMissingMessage);
  EXPECT_KIND(RecoverDifference(params, t, 2, 0, 1, 1), ErrorKind::kMissingMessage);
}

TEST(DifferenceTest, OnlyRoundOneMaskedUpdatesAreRead) {
  const GroupParams params = TinyGroup();
  RoundMessage wrong_round = MaskedUpdate(params, 1, 2, {1});
  wrong_round.round = 3;
  Transcript t = Of({MaskedUpdate(params, 1, 1, {7}), wrong_round});
  EXPECT_KIND(RecoverDifference(params, t, 1, 0, 1, 2), ErrorKind::kMissingMessage);
}

// ---- Evaluation.

TEST(EvaluateTest, AllPairs) {
  EXPECT_TRUE(AllPairs(1).empty());
  EXPECT_EQ(AllPairs(3), (std::vector<IterationPair>{{1, 2}, {1, 3}, {2, 3}}));
}

TEST(EvaluateTest, EmptyPairsGiveUndefinedRate) {
  GroundTruthInputs truth = {{1, {{1}}}};
  ASSERT_OK_AND_ASSIGN(AttackReport r,
                       EvaluateAttack(TinyGroup(), Transcript{}, 1, truth, {}));
  EXPECT_TRUE(r.triples.empty());
  EXPECT_FALSE(r.match_rate.has_value());
  EXPECT_TRUE(r.ToJson()["match_rate_undefined"].get<bool>());
}

TEST(EvaluateTest, BaselineRecoversEveryDifference) {
  ProtocolConfig c = Config(10, 7, 3, 4, 8, Group40(), 42);
  c.mode = Mode::kMalicious;
  ASSERT_OK_AND_ASSIGN(RunOutcome out, RunSimulation(c, {}));
  AttackReport r = Attack(out);
  EXPECT_EQ(r.triples.size(), 10u * 4 * 3);
  EXPECT_EQ(r.matches, r.triples.size());
  EXPECT_EQ(r.match_rate, 1.0);
  EXPECT_TRUE(r.skipped.empty());
  // Independent oracle on the recorded inputs.
  for (const auto& t : r.triples) {
    const auto& x = out.report.inputs.at(t.user);
    const mpz_class diff = mpz_class(static_cast<unsigned long>(x[t.pair.k2 - 1][t.coordinate])) -
                           mpz_class(static_cast<unsigned long>(x[t.pair.k1 - 1][t.coordinate]));
    EXPECT_EQ(t.recovered_diff, ReduceScalar(c.masking_group, diff));
  }
}

TEST(EvaluateTest, ResidueIsTheMaskDifference) {
  ProtocolConfig c = Config(4, 3, 3, 2, 8, Group40(), 7);
  c.variant = Variant::kPerIterationMasks;
  RunOptions opts;
  opts.dropout_rate = 0.25;
  ASSERT_OK_AND_ASSIGN(RunOutcome out, RunSimulation(c, opts));
  AttackReport r = Attack(out);
  ASSERT_FALSE(r.triples.empty());
  EXPECT_EQ(r.matches, 0u);
  const GroupParams& params = c.masking_group;
  for (const auto& t : r.triples) {
    const auto& s = out.secrets.at(t.user);
    const Scalar& r1 = s[(t.pair.k1 - 1) * c.vector_len + t.coordinate];
    const Scalar& r2 = s[(t.pair.k2 - 1) * c.vector_len + t.coordinate];
    EXPECT_EQ(ScalarSub(params, t.recovered_diff, t.true_diff),
              ScalarSub(params, r2, r1));
  }
  // Every (user, pair) with a dropped iteration is skipped, not guessed.
  size_t expected_pairs = 0;
  for (const auto& [user, rows] : out.report.inputs) {
    for (const auto& p : AllPairs(3)) {
      auto sent = [&](uint64_t k) {
        const auto& s = out.report.iterations[k - 1].senders;
        return std::find(s.begin(), s.end(), user) != s.end();
      };
      expected_pairs += sent(p.k1) && sent(p.k2);
    }
  }
  EXPECT_EQ(r.triples.size(), expected_pairs * 2);
  EXPECT_EQ(r.skipped.size(), 4 * 3 - expected_pairs);
}

TEST(EvaluateTest, RoundThreeTrafficDoesNotMatter) {
  ProtocolConfig c = Config(4, 3, 2, 2, 8, Group40(), 3);
  c.mode = Mode::kMalicious;
  ASSERT_OK_AND_ASSIGN(RunOutcome out, RunSimulation(c, {}));
  AttackReport full = Attack(out);
  RunOutcome stripped = out;
  std::erase_if(stripped.transcript.records,
                [](const TranscriptRecord& r) { return r.msg.round != 1 || r.msg.k == 0; });
  EXPECT_LT(stripped.transcript.records.size(), out.transcript.records.size());
  EXPECT_EQ(Attack(stripped).ToJson().dump(), full.ToJson().dump());
}

TEST(EvaluateTest, HardenedAtQ11IsAtChance) {
  std::vector<mpz_class> residues;
  size_t matches = 0;
  size_t triples = 0;
  for (uint64_t seed = 1; triples < 1200; ++seed) {
    ProtocolConfig c = Config(3, 2, 2, 4, 1, TinyGroup(), seed);
    c.variant = Variant::kPerIterationMasks;
    ASSERT_OK_AND_ASSIGN(RunOutcome out, RunSimulation(c, {}));
    AttackReport r = Attack(out);
    triples += r.triples.size();
    matches += r.matches;
    for (const auto& t : r.triples) {
      residues.push_back(ScalarSub(c.masking_group, t.recovered_diff, t.true_diff).value);
    }
  }
  const double rate = static_cast<double>(matches) / triples;
  const double sigma = std::sqrt((1.0 / 11) * (10.0 / 11) / triples);
  EXPECT_NEAR(rate, 1.0 / 11, 3 * sigma);
  UniformityTest u = ChiSquareUniform(residues, 11);
  EXPECT_EQ(u.bins, 11u);
  ASSERT_TRUE(u.p_value.has_value());
  EXPECT_GT(*u.p_value, 0.01);
}

TEST(EvaluateTest, ChiSquareOracle) {
  // Perfectly flat counts give statistic 0; all mass in one bin gives
  // (N - N/q)^2 / (N/q) + (q - 1) * N/q.
  std::vector<mpz_class> flat;
  for (int rep = 0; rep < 10; ++rep) {
    for (unsigned long v = 0; v < 11; ++v) flat.push_back(v);
  }
  UniformityTest f = ChiSquareUniform(flat, 11);
  EXPECT_DOUBLE_EQ(f.statistic, 0.0);
  EXPECT_NEAR(*f.p_value, 1.0, 1e-12);
  std::vector<mpz_class> spike(110, mpz_class(3));
  UniformityTest s = ChiSquareUniform(spike, 11);
  EXPECT_NEAR(s.statistic, 100.0 * 100 / 10 + 10 * 10, 1e-9);
  EXPECT_LT(*s.p_value, 1e-10);
  EXPECT_FALSE(ChiSquareUniform(std::vector<mpz_class>(20, 1), 11).p_value.has_value());
}

// ---- Linear-model inversion.

TEST(LinearTest, HandExample) {
  Eigen::Vector2d a(2, 1), w1(1, 0), w2(0, 1);
  // g1 = 2 a = (4, 2), g2 = 1 a = (2, 1), g2 - g1 = (-2, -1).
  Eigen::Vector2d diff(-2, -1);
  ASSERT_OK_AND_ASSIGN(InversionResult r, LinearInversionDemo(diff, w1, w2, a));
  EXPECT_NEAR(r.abs_cosine, 1.0, 1e-12);
  EXPECT_NEAR(r.direction.norm(), 1.0, 1e-12);
  EXPECT_NEAR((r.reconstruction.cwiseAbs() - a).norm(), 0.0, 1e-12);
}

TEST(LinearTest, OrthogonalSampleIsDegenerate) {
  Eigen::Vector2d a(1, 1), w1(1, 0), w2(0, 1);
  EXPECT_KIND(LinearInversionDemo(Eigen::Vector2d::Zero(), w1, w2, a),
              ErrorKind::kDegenerateScale);
}

TEST(LinearTest, QuantizationDecodesDifferences) {
  ProtocolConfig c = Config(2, 1, 2, 3, 16, Group40(), 1);
  Prng prng = Prng::FromSeed(1, "scenario");
  LinearModelScenario s = LinearModelScenario::Create(c, prng);
  const Eigen::VectorXd g1 = s.Gradient(1, 1);
  const Eigen::VectorXd g2 = s.Gradient(2, 1);
  const auto q1 = s.Quantize(g1);
  const auto q2 = s.Quantize(g2);
  std::vector<Scalar> diff;
  for (size_t m = 0; m < 3; ++m) {
    EXPECT_LT(q1[m], uint64_t{1} << 16);
    diff.push_back(ReduceScalar(c.masking_group, mpz_class(static_cast<unsigned long>(q2[m])) -
                                                     mpz_class(static_cast<unsigned long>(q1[m]))));
  }
  Eigen::VectorXd decoded = DecodeSignedDifference(diff, c.masking_group.q, s.scale);
  EXPECT_LT((decoded - (g2 - g1)).cwiseAbs().maxCoeff(), 1.0 / s.scale);
  ASSERT_OK_AND_ASSIGN(LinearModelScenario back, LinearModelScenario::FromJson(s.ToJson()));
  EXPECT_EQ(back.ToJson().dump(), s.ToJson().dump());
}

double DemoCosine(Variant variant) {
  ProtocolConfig c = Config(5, 3, 3, 8, 16, Group40(), 11);
  c.variant = variant;
  Prng prng = Prng::FromSeed(c.seed, "scenario");
  LinearModelScenario s = LinearModelScenario::Create(c, prng);
  RunOptions opts;
  opts.inputs = s.AsInputSource();
  RunOutcome out = RunSimulation(c, opts).value();
  auto demo = RunInversionDemo(Attack(out), s);
  return demo["mean_abs_cosine"].get<double>();
}

TEST(LinearTest, BaselineRecoversTheSampleDirection) {
  EXPECT_GT(DemoCosine(Variant::kBaseline), 0.99);
}

TEST(LinearTest, HardenedDirectionIsNoise) {
  EXPECT_LT(DemoCosine(Variant::kPerIterationMasks), 0.5);
}

}  // namespace
}  // namespace seclab
