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

#include "seclab/group_math.h"

#include <algorithm>
#include <array>
#include <set>

#include "absl/strings/str_cat.h"
#include "seclab/prng.h"
#include "seclab/status.h"

namespace seclab {
namespace {

constexpr std::string_view kHashToGroupDomain = "seclab/hash-to-group/v1";

constexpr std::array<unsigned, 54> kSmallPrimes = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,
    47,  53,  59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107,
    109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181,
    191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251};

// False only when n has a small factor other than itself.
bool PassesSieve(const mpz_class& n) {
  for (unsigned sp : kSmallPrimes) {
    if (n == sp) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), sp)) return false;
  }
  return true;
}

inline uint64_t MulMod64(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t LowWord(const mpz_class& v) {
  return static_cast<uint64_t>(mpz_getlimbn(v.get_mpz_t(), 0));
}

uint64_t Mix(uint64_t key) {
  key ^= key >> 33;
  key *= 0xff51afd7ed558ccdULL;
  key ^= key >> 33;
  return key;
}

mpz_class CeilSqrt(const mpz_class& n) {
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  if (r * r < n) ++r;
  return r;
}

}  // namespace

bool IsProbablePrime(const mpz_class& n, int rounds) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (mpz_even_p(n.get_mpz_t())) return false;
  mpz_class d = n - 1;
  unsigned s = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d >>= 1;
    ++s;
  }
  Bytes seed = ToBytes("seclab/miller-rabin");
  Bytes nb = ToBigEndian(n, ByteWidth(n));
  seed.insert(seed.end(), nb.begin(), nb.end());
  Prng prng(seed);
  const mpz_class n_minus_1 = n - 1;
  const mpz_class span = n - 3;  // witnesses in [2, n - 2]
  for (int round = 0; round < rounds; ++round) {
    mpz_class a = span > 0 ? prng.Uniform(span) + 2 : mpz_class(2);
    mpz_class x = PowMod(a, d, n);
    if (x == 1 || x == n_minus_1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = Mod(x * x, n);
      if (x == n_minus_1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

absl::StatusOr<GroupParams> MakeGroupParams(const mpz_class& p,
                                            const mpz_class& q,
                                            const mpz_class& g) {
  if (p != 2 * q + 1) {
    return MakeError(ErrorKind::kInvalidGroupParams, "p != 2q + 1");
  }
  if (!IsProbablePrime(q) || !IsProbablePrime(p)) {
    return MakeError(ErrorKind::kInvalidGroupParams, "p or q not prime");
  }
  if (g < 2 || g >= p || PowMod(g, q, p) != 1) {
    return MakeError(ErrorKind::kInvalidGroupParams,
                     "g is not a generator of the order-q subgroup");
  }
  GroupParams params{p, q, g, static_cast<int>(mpz_sizeinbase(q.get_mpz_t(), 2))};
  return params;
}

absl::StatusOr<GroupParams> GenerateGroup(int bits, uint64_t seed) {
  if (bits < 4 || bits > 256) {
    return MakeError(ErrorKind::kInvalidGroupParams,
                     absl::StrCat("bits must be in [4, 256], got ", bits));
  }
  Prng prng = Prng::FromSeed(seed, absl::StrCat("group/", bits));
  const mpz_class top = mpz_class(1) << (bits - 1);
  while (true) {
    mpz_class q = prng.Uniform(top) | top;
    q |= 1;
    const mpz_class p = 2 * q + 1;
    if (!PassesSieve(q) || !PassesSieve(p)) continue;
    if (!IsProbablePrime(q) || !IsProbablePrime(p)) continue;
    mpz_class g = 2;
    while (PowMod(g, q, p) != 1) ++g;
    return GroupParams{p, q, g, bits};
  }
}

bool IsGroupMember(const GroupParams& params, const mpz_class& value) {
  return value >= 1 && value < params.p && PowMod(value, params.q, params.p) == 1;
}

GroupElement Identity() { return GroupElement(mpz_class(1)); }

GroupElement Generator(const GroupParams& params) {
  return GroupElement(params.g);
}

GroupElement HashToGroup(const GroupParams& params, ByteSpan tag) {
  for (unsigned counter = 0;; ++counter) {
    Bytes input = ToBytes(kHashToGroupDomain);
    input.insert(input.end(), tag.begin(), tag.end());
    if (counter > 0) input.push_back(static_cast<uint8_t>(counter));
    Digest h = Sha256(input);
    mpz_class v = Mod(FromBigEndian(h), params.p);
    mpz_class e = Mod(v * v, params.p);
    if (e > 1) return GroupElement(e);
  }
}

GroupElement Exp(const GroupParams& params, const GroupElement& base,
                 const Scalar& e) {
  return GroupElement(PowMod(base.value, Mod(e.value, params.q), params.p));
}

GroupElement Mul(const GroupParams& params, const GroupElement& a,
                 const GroupElement& b) {
  return GroupElement(Mod(a.value * b.value, params.p));
}

GroupElement Inverse(const GroupParams& params, const GroupElement& a) {
  return GroupElement(InvertMod(a.value, params.p));
}

GroupElement Div(const GroupParams& params, const GroupElement& a,
                 const GroupElement& b) {
  return Mul(params, a, Inverse(params, b));
}

Scalar ScalarAdd(const GroupParams& params, const Scalar& a, const Scalar& b) {
  return Scalar(Mod(a.value + b.value, params.q));
}

Scalar ScalarSub(const GroupParams& params, const Scalar& a, const Scalar& b) {
  return Scalar(Mod(a.value - b.value, params.q));
}

Scalar ScalarMul(const GroupParams& params, const Scalar& a, const Scalar& b) {
  return Scalar(Mod(a.value * b.value, params.q));
}

Scalar ReduceScalar(const GroupParams& params, const mpz_class& v) {
  return Scalar(Mod(v, params.q));
}

absl::StatusOr<DlogSolver> DlogSolver::Create(const GroupParams& params,
                                              const GroupElement& base,
                                              const mpz_class& bound) {
  if (bound < 1 || bound > params.q) {
    return MakeError(ErrorKind::kNotInRange, "search bound outside [1, q]");
  }
  const mpz_class m = CeilSqrt(bound);
  if (m >= (mpz_class(1) << 31)) {
    return absl::ResourceExhaustedError(
        "discrete-log search space too large for baby-step giant-step");
  }
  DlogSolver solver;
  solver.params_ = params;
  solver.base_ = base;
  solver.bound_ = bound;
  solver.m_ = m.get_ui();
  solver.word_sized_ = mpz_sizeinbase(params.p.get_mpz_t(), 2) <= 63;
  mpz_class giant_count = (bound + m - 1) / m;
  solver.giant_steps_ = giant_count.get_ui();

  size_t capacity = 16;
  while (capacity < 2 * solver.m_) capacity <<= 1;
  solver.keys_.assign(capacity, 0);
  solver.values_.assign(capacity, 0);

  if (solver.word_sized_) {
    const uint64_t p = params.p.get_ui();
    const uint64_t b = base.value.get_ui();
    uint64_t cur = 1;
    for (uint64_t j = 0; j < solver.m_; ++j) {
      solver.Insert(cur, static_cast<uint32_t>(j));
      cur = MulMod64(cur, b, p);
    }
  } else {
    mpz_class cur = 1;
    for (uint64_t j = 0; j < solver.m_; ++j) {
      solver.Insert(LowWord(cur), static_cast<uint32_t>(j));
      cur = Mod(cur * base.value, params.p);
    }
  }
  solver.giant_ = PowMod(InvertMod(base.value, params.p), m, params.p);
  solver.steps_ = solver.m_;
  return solver;
}

void DlogSolver::Insert(uint64_t key, uint32_t value) {
  const size_t mask = keys_.size() - 1;
  for (size_t slot = Mix(key) & mask;; slot = (slot + 1) & mask) {
    if (keys_[slot] == 0) {
      keys_[slot] = key;
      values_[slot] = value;
      return;
    }
    // First insertion wins, so each key maps to its smallest exponent.
    if (keys_[slot] == key && word_sized_) return;
  }
}

bool DlogSolver::Find(uint64_t key, uint32_t* value) const {
  const size_t mask = keys_.size() - 1;
  for (size_t slot = Mix(key) & mask; keys_[slot] != 0;
       slot = (slot + 1) & mask) {
    if (keys_[slot] == key) {
      *value = values_[slot];
      return true;
    }
  }
  return false;
}

absl::StatusOr<Scalar> DlogSolver::Solve(const GroupElement& target) const {
  if (word_sized_) {
    const uint64_t p = params_.p.get_ui();
    const uint64_t giant = giant_.get_ui();
    uint64_t gamma = Mod(target.value, params_.p).get_ui();
    for (uint64_t i = 0; i < giant_steps_; ++i) {
      ++steps_;
      uint32_t j;
      if (gamma != 0 && Find(gamma, &j)) {
        const mpz_class x = mpz_class(i) * m_ + j;
        if (x < bound_) return Scalar(x);
        break;
      }
      gamma = MulMod64(gamma, giant, p);
    }
  } else {
    mpz_class gamma = Mod(target.value, params_.p);
    for (uint64_t i = 0; i < giant_steps_; ++i) {
      ++steps_;
      // Keys are truncated to one word here, so confirm every hit. Truncated
      // collisions are not reachable through Find's first-wins slots, hence
      // the linear rescan below.
      const uint64_t key = LowWord(gamma);
      const size_t mask = keys_.size() - 1;
      for (size_t slot = Mix(key) & mask; keys_[slot] != 0;
           slot = (slot + 1) & mask) {
        if (keys_[slot] != key) continue;
        const mpz_class x = mpz_class(i) * m_ + values_[slot];
        if (PowMod(base_.value, x, params_.p) == target.value) {
          if (x < bound_) return Scalar(x);
          return MakeError(ErrorKind::kNotInRange,
                           "discrete log exceeds the search bound");
        }
      }
      gamma = Mod(gamma * giant_, params_.p);
    }
  }
  return MakeError(ErrorKind::kNotInRange,
                   "no exponent in [0, bound) maps to the target");
}

absl::StatusOr<Scalar> BoundedDlog(const GroupParams& params,
                                   const GroupElement& base,
                                   const GroupElement& target,
                                   const mpz_class& bound) {
  auto solver = DlogSolver::Create(params, base, bound);
  if (!solver.ok()) return solver.status();
  return solver->Solve(target);
}

absl::StatusOr<Scalar> FullDlog(const GroupParams& params,
                                const GroupElement& base,
                                const GroupElement& target) {
  auto x = BoundedDlog(params, base, target, params.q);
  if (!x.ok() && GetErrorKind(x.status()) == ErrorKind::kNotInRange) {
    return MakeError(ErrorKind::kNoSolution,
                     "target is not a power of the base");
  }
  return x;
}

absl::StatusOr<std::vector<Scalar>> LagrangeAtZero(
    std::span<const uint64_t> indices, const mpz_class& q) {
  if (indices.empty()) {
    return MakeError(ErrorKind::kInsufficientShares, "no indices");
  }
  std::set<uint64_t> seen;
  std::set<mpz_class> residues;
  for (uint64_t idx : indices) {
    if (!seen.insert(idx).second) {
      return MakeError(ErrorKind::kDuplicateIndex,
                       absl::StrCat("index ", idx, " repeated"));
    }
    mpz_class r = Mod(mpz_class(idx), q);
    if (r == 0 || !residues.insert(r).second) {
      return MakeError(ErrorKind::kIndexCollisionModQ,
                       absl::StrCat("index ", idx, " collides modulo q"));
    }
  }
  std::vector<Scalar> coeffs;
  coeffs.reserve(indices.size());
  for (size_t j = 0; j < indices.size(); ++j) {
    mpz_class num = 1;
    mpz_class den = 1;
    const mpz_class xj(indices[j]);
    for (size_t m = 0; m < indices.size(); ++m) {
      if (m == j) continue;
      const mpz_class xm(indices[m]);
      num = Mod(num * xm, q);
      den = Mod(den * (xm - xj), q);
    }
    coeffs.emplace_back(Mod(num * InvertMod(den, q), q));
  }
  return coeffs;
}

absl::StatusOr<GroupElement> ExponentRecon(std::span<const ExponentPoint> points,
                                           size_t t,
                                           const GroupParams& params) {
  if (t == 0 || points.size() < t) {
    return MakeError(ErrorKind::kInsufficientShares,
                     absl::StrCat("have ", points.size(), " points, need ", t));
  }
  std::vector<ExponentPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].first == sorted[i - 1].first) {
      return MakeError(ErrorKind::kDuplicateIndex,
                       absl::StrCat("index ", sorted[i].first, " repeated"));
    }
  }
  sorted.resize(t);
  std::vector<uint64_t> indices;
  for (const auto& [idx, unused] : sorted) indices.push_back(idx);
  auto coeffs = LagrangeAtZero(indices, params.q);
  if (!coeffs.ok()) return coeffs.status();
  GroupElement acc = Identity();
  for (size_t i = 0; i < t; ++i) {
    acc = Mul(params, acc, Exp(params, sorted[i].second, (*coeffs)[i]));
  }
  return acc;
}

}  // namespace seclab
