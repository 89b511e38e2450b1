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

// Runs the acceptance checks end to end and prints one PASS/FAIL line each.
// Exit status is 0 only when every check passes.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "seclab/attack/attack.h"
#include "seclab/bytes.h"
#include "seclab/group_math.h"
#include "seclab/shamir.h"
#include "seclab/sim/bench.h"
#include "seclab/sim/simulation.h"
#include "seclab/status.h"

namespace seclab {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

const GroupParams& Group40() {
  static const GroupParams params = GenerateGroup(40, 1).value();
  return params;
}

GroupParams Tiny() {
  return MakeGroupParams(mpz_class(23), mpz_class(11), mpz_class(2)).value();
}

uint32_t TwoThirds(uint32_t n) { return (2 * n + 2) / 3; }

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

// Sum of the recorded inputs over the server's online set.
std::vector<uint64_t> Oracle(const RunReport& report, const IterationRecord& it) {
  std::vector<uint64_t> sum(report.config.vector_len, 0);
  for (uint64_t id : it.online) {
    const auto& x = report.inputs.at(id).at(it.k - 1);
    for (size_t m = 0; m < sum.size(); ++m) sum[m] += x[m];
  }
  return sum;
}

Outcome Correctness() {
  const auto start = Clock::now();
  size_t runs = 0, exact = 0, aborted = 0, wrong = 0;
  for (uint32_t n : {4u, 10u, 30u}) {
    for (uint32_t l : {1u, 4u}) {
      for (double rate : {0.0, 0.1, 0.2}) {
        for (uint64_t seed = 1; seed <= 20; ++seed) {
          ProtocolConfig c = Config(n, TwoThirds(n), 5, l, 8, Group40(), seed);
          c.mode = seed % 2 == 0 ? Mode::kMalicious : Mode::kSemiHonest;
          RunOptions opts;
          opts.dropout_rate = rate;
          auto out = RunSimulation(c, opts);
          if (!out.ok()) return {false, std::string(out.status().message())};
          ++runs;
          if (out->report.setup_abort.has_value()) {
            aborted += c.iterations;
            continue;
          }
          for (const auto& it : out->report.iterations) {
            if (!it.output.has_value()) {
              ++aborted;
            } else if (*it.output == Oracle(out->report, it)) {
              ++exact;
            } else {
              ++wrong;
            }
          }
        }
      }
    }
  }
  const double secs = Seconds(start);
  return {wrong == 0 && exact > 0 && secs < 120,
          absl::StrCat(runs, " runs, ", exact, " iterations exact, ", wrong, " wrong, ",
                       aborted, " aborted, ", static_cast<int>(secs), " s")};
}

Outcome OracleEquivalence() {
  size_t agree = 0, total = 0;
  for (const GroupParams& params : {Tiny(), Group40()}) {
    Prng prng = Prng::FromSeed(2, "criterion-2");
    const GroupElement base = HashToGroup(params, AsBytes("criterion-2"));
    for (int trial = 0; trial < 100; ++trial) {
      const size_t t = 1 + prng.UniformU64(5);
      const size_t n = t + prng.UniformU64(10 - t + 1);
      std::vector<uint64_t> indices(n);
      for (size_t i = 0; i < n; ++i) indices[i] = i + 1;
      const Scalar secret(prng.Uniform(params.q));
      auto shares = ShamirShare(secret, indices, t, params.q, prng).value();
      std::shuffle(shares.begin(), shares.end(), prng);
      shares.resize(t + prng.UniformU64(n - t + 1));
      std::vector<ExponentPoint> points;
      for (const auto& s : shares) points.emplace_back(s.index, Exp(params, base, s.value));
      auto in_exponent = ExponentRecon(points, t, params);
      auto plain = ShamirRecon(shares, t, params.q);
      ++total;
      agree += in_exponent.ok() && plain.ok() && *in_exponent == Exp(params, base, *plain) &&
               *plain == secret;
    }
  }
  return {agree == total, absl::StrCat(agree, "/", total, " polynomials agree at q=11 and ",
                                       mpz_sizeinbase(Group40().q.get_mpz_t(), 2), "-bit q")};
}

Outcome DiscreteLogs() {
  const GroupParams& params = Group40();
  Prng prng = Prng::FromSeed(3, "criterion-3");
  const GroupElement base = Generator(params);
  const mpz_class bound = mpz_class(1) << 20;
  size_t bounded_ok = 0;
  for (int i = 0; i < 1000; ++i) {
    const Scalar x(prng.Uniform(bound));
    auto got = BoundedDlog(params, base, Exp(params, base, x), bound);
    bounded_ok += got.ok() && *got == x;
  }
  size_t full_ok = 0;
  double slowest = 0;
  for (int i = 0; i < 100; ++i) {
    const Scalar x(prng.Uniform(params.q));
    const auto start = Clock::now();
    auto got = FullDlog(params, base, Exp(params, base, x));
    slowest = std::max(slowest, Seconds(start));
    full_ok += got.ok() && *got == x;
  }
  return {bounded_ok == 1000 && full_ok == 100 && slowest < 1.0,
          absl::StrCat("bounded ", bounded_ok, "/1000, full ", full_ok,
                       "/100, slowest full ", static_cast<int>(slowest * 1000), " ms")};
}

AttackReport Attack(const RunOutcome& out) {
  return EvaluateAttack(out.report.config.masking_group, out.transcript,
                        out.report.config.vector_len, out.report.inputs,
                        AllPairs(out.report.config.iterations))
      .value();
}

Outcome BaselineAttack() {
  const auto start = Clock::now();
  ProtocolConfig c = Config(10, 7, 3, 4, 8, Group40(), 4);
  auto out = RunSimulation(c, {});
  if (!out.ok()) return {false, std::string(out.status().message())};
  AttackReport r = Attack(*out);
  const double secs = Seconds(start);
  return {r.triples.size() == 120 && r.matches == 120 && secs < 300,
          absl::StrCat(r.matches, "/", r.triples.size(), " triples recovered, ",
                       static_cast<int>(secs), " s")};
}

Outcome HardenedAttack() {
  std::vector<mpz_class> residues;
  size_t matches = 0, triples = 0;
  const int trials = 200;
  for (int trial = 1; trial <= trials; ++trial) {
    ProtocolConfig c = Config(3, 2, 2, 4, 1, Tiny(), trial);
    c.variant = Variant::kPerIterationMasks;
    auto out = RunSimulation(c, {});
    if (!out.ok()) return {false, std::string(out.status().message())};
    AttackReport r = Attack(*out);
    triples += r.triples.size();
    matches += r.matches;
    for (const auto& t : r.triples) {
      residues.push_back(ScalarSub(c.masking_group, t.recovered_diff, t.true_diff).value);
    }
  }
  const double rate = static_cast<double>(matches) / static_cast<double>(triples);
  const double chance = 1.0 / 11;
  const double sigma = std::sqrt(chance * (1 - chance) / static_cast<double>(triples));
  const UniformityTest u = ChiSquareUniform(residues, 11);

  ProtocolConfig big = Config(10, 7, 3, 4, 8, Group40(), 5);
  big.variant = Variant::kPerIterationMasks;
  auto out = RunSimulation(big, {});
  if (!out.ok()) return {false, std::string(out.status().message())};
  AttackReport r40 = Attack(*out);

  const bool pass = std::abs(rate - chance) <= 3 * sigma && u.p_value.has_value() &&
                    *u.p_value > 0.01 && r40.matches == 0 && !r40.triples.empty();
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "q=11: %d runs, %zu triples, match rate %.4f (1/q=%.4f, 3 sigma=%.4f), "
                "chi-square p=%.3f; 40-bit q: %zu/%zu matches",
                trials, triples, rate, chance, 3 * sigma, u.p_value.value_or(-1), r40.matches,
                r40.triples.size());
  return {pass, buf};
}

Outcome MacDefense() {
  size_t tampered = 0, excluded = 0, false_exclusions = 0, incomplete = 0;
  size_t undefended_hits = 0;
  for (uint64_t seed = 1; seed <= 100; ++seed) {
    for (bool defended : {true, false}) {
      ProtocolConfig c = Config(6, 4, 2, 2, 8, Group40(), seed);
      c.defenses.mac_updates = defended;
      RunOptions opts;
      opts.adversary.kind = AdversaryKind::kTamper;
      auto out = RunSimulation(c, opts);
      if (!out.ok()) return {false, std::string(out.status().message())};
      bool hit = false;
      for (const auto& it : out->report.iterations) {
        if (!defended) {
          hit |= (it.output.has_value() && !it.correct()) ||
                 it.abort == std::string(ErrorKindName(ErrorKind::kNotInRange));
          continue;
        }
        std::set<uint64_t> rejected(it.mac_rejected.begin(), it.mac_rejected.end());
        rejected.insert(it.malformed_rejected.begin(), it.malformed_rejected.end());
        for (uint64_t id : it.tampered) {
          ++tampered;
          excluded += rejected.erase(id);
        }
        false_exclusions += rejected.size();
        incomplete += !it.correct();
      }
      undefended_hits += hit;
    }
  }
  return {tampered > 0 && excluded == tampered && false_exclusions == 0 && incomplete == 0 &&
              undefended_hits > 0,
          absl::StrCat("defended: ", excluded, "/", tampered, " tampered excluded, ",
                       false_exclusions, " false exclusions, ", incomplete,
                       " incomplete iterations; undefended: ", undefended_hits,
                       "/100 runs corrupted")};
}

Outcome MultisigEfficiency() {
  ProtocolConfig base = Config(10, 7, 1, 1, 8, Group40(), 7);
  base.mode = Mode::kMalicious;
  auto rows = RunBench(base, {10, 20, 40});
  if (!rows.ok()) return {false, std::string(rows.status().message())};
  std::vector<double> off, on;
  std::set<size_t> agg_sizes;
  bool completed = true;
  for (const auto& r : *rows) {
    completed &= r.completed;
    (r.multisig ? on : off).push_back(r.signature_verifications);
    if (r.multisig) agg_sizes.insert(r.aggregate_signature_bytes.value_or(0));
  }
  const bool pass = completed && off == std::vector<double>{10, 20, 40} &&
                    off[1] / off[0] == 2.0 && off[2] / off[1] == 2.0 &&
                    on == std::vector<double>{1, 1, 1} && agg_sizes.size() == 1 &&
                    *agg_sizes.begin() > 0;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "verifications off %.0f/%.0f/%.0f, on %.0f/%.0f/%.0f, aggregate %zu bytes",
                off[0], off[1], off[2], on[0], on[1], on[2], *agg_sizes.begin());
  return {pass, buf};
}

std::string FileSha(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  const std::string bytes = s.str();
  return ToHex(Sha256(AsBytes(bytes)));
}

Outcome Determinism() {
  const auto dir = std::filesystem::temp_directory_path() /
                   absl::StrCat("seclab_acceptance_", ::getpid());
  std::filesystem::create_directories(dir);
  std::vector<std::string> hashes;
  for (const char* tag : {"a", "b"}) {
    const std::string report = (dir / absl::StrCat(tag, ".json")).string();
    const std::string transcript = (dir / absl::StrCat(tag, ".jsonl")).string();
    const std::string cmd = absl::StrCat(
        SECLAB_CLI_PATH,
        " run --users 10 --threshold 7 --iterations 3 --vector-len 4 --mode malicious "
        "--defense-mac --adversary tamper --dropout-rate 0.2 --seed 8 --report ",
        report, " --transcript ", transcript, " >/dev/null");
    const int status = std::system(cmd.c_str());
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
      std::filesystem::remove_all(dir);
      return {false, "cli run failed"};
    }
    hashes.push_back(FileSha(report));
    hashes.push_back(FileSha(transcript));
  }
  std::filesystem::remove_all(dir);
  return {hashes[0] == hashes[2] && hashes[1] == hashes[3],
          absl::StrCat("report ", hashes[0].substr(0, 16), " transcript ",
                       hashes[1].substr(0, 16))};
}

}  // namespace
}  // namespace seclab

int main() {
  using seclab::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> checks = {
      {"correctness with dropouts", seclab::Correctness},
      {"exponent reconstruction oracle", seclab::OracleEquivalence},
      {"discrete logs", seclab::DiscreteLogs},
      {"baseline attack", seclab::BaselineAttack},
      {"attack against fresh masks", seclab::HardenedAttack},
      {"update authentication", seclab::MacDefense},
      {"multisignature cost", seclab::MultisigEfficiency},
      {"determinism", seclab::Determinism},
  };
  int failures = 0;
  for (size_t i = 0; i < checks.size(); ++i) {
    Outcome o = checks[i].second();
    failures += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, checks[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
