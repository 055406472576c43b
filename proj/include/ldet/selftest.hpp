/*
 * Copyright 2026 The ldet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LDET_SELFTEST_HPP
#define LDET_SELFTEST_HPP

#include <chrono>
#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "ldet/field.hpp"
#include "ldet/linalg.hpp"
#include "ldet/matrix.hpp"
#include "ldet/ntheory.hpp"
#include "ldet/theorems.hpp"

namespace ldet {

struct CheckResult {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  double seconds = 0;
  std::string first_failure;

  bool ok() const { return failures == 0; }
};

using PfaffianFn = std::function<std::uint64_t(const PrimeFieldOps&, std::vector<std::uint64_t>, std::size_t)>;

struct SelftestConfig {
  /// Kernel under test for the Pfaffian checks.
  PfaffianFn pfaffian = [](const PrimeFieldOps& f, std::vector<std::uint64_t> a, std::size_t n) {
    return ldet::pfaffian(f, std::move(a), n);
  };
  std::uint64_t seed = 20240611;
  unsigned skew_matrices = 1000;
  unsigned lemma_2_1_trials = 500;
};

namespace detail {

class Check {
 public:
  explicit Check(std::string name) : start_(std::chrono::steady_clock::now()) { r_.name = std::move(name); }

  void expect(bool ok, const std::string& what) {
    ++r_.cases;
    if (ok) return;
    if (r_.failures++ == 0) r_.first_failure = what;
  }

  void tally(std::uint64_t cases, std::uint64_t failures, const std::string& what) {
    if (failures > 0 && r_.failures == 0) r_.first_failure = what;
    r_.cases += cases;
    r_.failures += failures;
  }

  CheckResult done() {
    r_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return r_;
  }

 private:
  CheckResult r_;
  std::chrono::steady_clock::time_point start_;
};

inline std::uint64_t random_prime_below(std::uint64_t hi, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(3, hi - 1);
  for (;;) {
    const std::uint64_t c = dist(rng) | 1;
    if (c < hi && is_prime(c)) return c;
  }
}

inline std::vector<std::uint64_t> random_skew(std::size_t n, std::uint64_t p, double zero_rate, std::mt19937_64& rng) {
  std::vector<std::uint64_t> a(n * n, 0);
  std::uniform_int_distribution<std::uint64_t> val(1, p - 1);
  std::bernoulli_distribution zero(zero_rate);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::uint64_t v = zero(rng) ? 0 : val(rng);
      a[i * n + j] = v;
      a[j * n + i] = v == 0 ? 0 : p - v;
    }
  }
  return a;
}

inline std::vector<std::size_t> random_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

inline std::vector<std::uint64_t> permute(const std::vector<std::uint64_t>& a, std::size_t n,
                                          const std::vector<std::size_t>& perm) {
  std::vector<std::uint64_t> out(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = a[perm[i] * n + perm[j]];
  }
  return out;
}

inline std::vector<std::uint64_t> odd_prime_powers(std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = 3; q <= hi; q += 2) {
    if (as_prime_power(q)) out.push_back(q);
  }
  return out;
}

}  // namespace detail

/// pf^2 = det on random skew matrices, one in three with many zero entries to
/// force pivot swaps; also pf of a simultaneous permutation picks up sgn(perm).
inline CheckResult check_pfaffian_squares(const SelftestConfig& cfg) {
  detail::Check c("pfaffian squared equals determinant");
  std::mt19937_64 rng(cfg.seed);
  for (unsigned t = 0; t < cfg.skew_matrices; ++t) {
    const std::uint64_t p = detail::random_prime_below(std::uint64_t{1} << 31, rng);
    const std::size_t n = 2 * (1 + t % 6);
    const PrimeFieldOps f{p};
    const auto a = detail::random_skew(n, p, t % 3 == 0 ? 0.6 : 0.0, rng);
    const std::uint64_t pf = cfg.pfaffian(f, a, n);
    const std::uint64_t d = determinant(f, a, n);
    c.expect(f.mul(pf, pf) == d, "p=" + std::to_string(p) + " n=" + std::to_string(n));
    const auto perm = detail::random_permutation(n, rng);
    const std::uint64_t pf_perm = cfg.pfaffian(f, detail::permute(a, n, perm), n);
    const std::uint64_t expected = permutation_sign(perm) == 1 ? pf : f.neg(pf);
    c.expect(pf_perm == expected, "permuted p=" + std::to_string(p) + " n=" + std::to_string(n));
  }
  return c.done();
}

/// 500 trials over F_p and over F_{p^2}, orders cycling through 1..8.
inline CheckResult check_lemma_2_1(const SelftestConfig& cfg) {
  detail::Check c("product-of-polynomial determinant factorization");
  std::mt19937_64 rng(cfg.seed + 1);
  for (unsigned k : {1u, 2u}) {
    unsigned left = cfg.lemma_2_1_trials;
    for (unsigned n = 1; left > 0; n = n % 8 + 1) {
      const unsigned batch = std::min(left, 25u);
      const std::uint64_t p = detail::random_prime_below(std::uint64_t{1} << 31, rng);
      const auto rec = verify_lemma_2_1(field_create(p, k), n, batch, rng());
      c.tally(batch, std::stoull(rec.computed.at("failures")),
              "F_" + std::to_string(p) + "^" + std::to_string(k) + " n=" + std::to_string(n));
      left -= batch;
    }
  }
  return c.done();
}

inline CheckResult check_lerch(std::uint64_t n_max = 128) {
  detail::Check c("multiplication permutation sign, n <= " + std::to_string(n_max));
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const auto rec = verify_lemma_2_2_at(n);
    c.expect(rec.verdict == Verdict::pass, "n=" + std::to_string(n));
  }
  return c.done();
}

inline CheckResult check_inversion_sign(std::uint64_t q_max = 343) {
  detail::Check c("inversion sign on squares, q <= " + std::to_string(q_max));
  for (std::uint64_t q : detail::odd_prime_powers(q_max)) {
    c.expect(verify_lemma_2_3_at(q).verdict == Verdict::pass, "q=" + std::to_string(q));
  }
  return c.done();
}

inline CheckResult check_huang_pan(std::uint64_t p_max = 200) {
  detail::Check c("folded multiplication sign, p <= " + std::to_string(p_max));
  for (std::uint64_t p : primes_in(3, static_cast<std::int64_t>(p_max))) {
    c.expect(huang_pan_agrees(p), "p=" + std::to_string(p));
  }
  return c.done();
}

/// quad_char against x^((q-1)/2), the square list, and the Legendre symbol on prime fields.
inline CheckResult check_euler_criterion(std::uint64_t q_max = 343) {
  detail::Check c("Euler criterion, q <= " + std::to_string(q_max));
  for (std::uint64_t q : detail::odd_prime_powers(q_max)) {
    const auto pp = as_prime_power(q);
    const Field f = field_create(pp->p, pp->k);
    std::vector<bool> is_square(q, false);
    for (Raw s : f->squares_raw()) is_square[s] = true;
    bool ok = true;
    for (Raw x = 0; x < q && ok; ++x) {
      const int chi = f->quad_char(x);
      const Raw e = f->pow(x, (q - 1) / 2);
      const int euler = x == 0 ? 0 : (e == f->one() ? 1 : (e == f->neg(f->one()) ? -1 : 2));
      ok = chi == euler && (chi == 1) == is_square[x] && (x == 0 || is_square[f->mul(x, x)]);
      if (ok && pp->k == 1) ok = chi == legendre(static_cast<std::int64_t>(x), pp->p);
    }
    c.expect(ok, "q=" + std::to_string(q));
  }
  return c.done();
}

/// det T_m(d,p) over 1..(p-1)/2 equals det T~_m(d,p) over the canonical square order.
inline CheckResult check_T_consistency(std::uint64_t p_max = 200) {
  detail::Check c("T and T~ agree on prime fields, p <= " + std::to_string(p_max));
  for (std::uint64_t p : primes_in(5, static_cast<std::int64_t>(p_max))) {
    const Field f = field_create(p);
    const auto nonresidue = static_cast<std::int64_t>(f->smallest_nonsquare_raw());
    for (std::int64_t d : {std::int64_t{1}, nonresidue}) {
      for (std::uint64_t m : {0u, 1u, 2u, 3u}) {
        const FieldElem a = det(build_T(p, d, m));
        const FieldElem b = det(build_T_tilde(f, embed_int(f, d), m));
        c.expect(a == b, "p=" + std::to_string(p) + " d=" + std::to_string(d) + " m=" + std::to_string(m));
      }
    }
  }
  return c.done();
}

/// det unchanged under 50 simultaneous row/column permutations per instance.
inline CheckResult check_permutation_invariance(const SelftestConfig& cfg) {
  detail::Check c("determinant invariant under simultaneous permutation");
  std::mt19937_64 rng(cfg.seed + 2);
  std::vector<MatrixOverField> instances;
  for (std::uint64_t p : {7u, 13u, 29u, 53u, 101u}) {
    instances.push_back(build_T(p, 1, 2));
    instances.push_back(build_D(p, 3));
    instances.push_back(build_S(p, 2, 0));
  }
  for (std::uint64_t q : {25u, 27u, 49u, 125u}) {
    const auto pp = as_prime_power(q);
    const Field f = field_create(pp->p, pp->k);
    instances.push_back(build_T_tilde(f, smallest_nonsquare(f), 2));
    instances.push_back(build_T_tilde(f, one(f), 3));
  }
  for (const auto& mat : instances) {
    const FieldElem base = det(mat);
    bool ok = true;
    for (int t = 0; t < 50 && ok; ++t) ok = det(mat.permuted(detail::random_permutation(mat.order(), rng))) == base;
    c.expect(ok, "q=" + std::to_string(mat.ctx()->order()) + " order " + std::to_string(mat.order()));
  }
  return c.done();
}

inline CheckResult check_identities(std::uint64_t p_max = 500) {
  detail::Check c("factorial and determinant identities, p <= " + std::to_string(p_max));
  for (std::uint64_t p : primes_in(5, static_cast<std::int64_t>(p_max))) {
    c.expect(verify_identities(p).verdict == Verdict::pass, "p=" + std::to_string(p));
  }
  return c.done();
}

/// p | D_p^(m) iff some coefficient C(h+m,k) + C(h+m,m-k) vanishes, p > 2m.
inline CheckResult check_divisibility_chain(std::uint64_t p_max = 500) {
  detail::Check c("determinant divisibility vs vanishing coefficients, p <= " + std::to_string(p_max));
  for (unsigned m : {1u, 3u, 5u, 7u}) {
    for (std::uint64_t p : primes_in(2 * m + 1, static_cast<std::int64_t>(p_max), ResidueFilter{1, 4})) {
      bool coefficient = false;
      for (unsigned k = 0; k <= (m - 1) / 2; ++k) coefficient = coefficient || coefficient_vanishes(p, m, k);
      c.expect(p_divides_D(p, m) == coefficient, "p=" + std::to_string(p) + " m=" + std::to_string(m));
    }
  }
  return c.done();
}

inline std::vector<CheckResult> run_selftest(const SelftestConfig& cfg = {}, std::ostream* log = nullptr) {
  std::vector<std::function<CheckResult()>> checks{
      [&] { return check_pfaffian_squares(cfg); },
      [&] { return check_lemma_2_1(cfg); },
      [] { return check_lerch(); },
      [] { return check_inversion_sign(); },
      [] { return check_huang_pan(); },
      [] { return check_euler_criterion(); },
      [] { return check_T_consistency(); },
      [&] { return check_permutation_invariance(cfg); },
      [] { return check_identities(); },
      [] { return check_divisibility_chain(); },
  };
  std::vector<CheckResult> out;
  for (auto& run : checks) {
    out.push_back(run());
    if (log) {
      const auto& r = out.back();
      *log << (r.ok() ? "PASS " : "FAIL ") << r.name << " (" << r.cases << " cases, " << r.seconds << " s)";
      if (!r.ok()) *log << ": " << r.failures << " failed, first " << r.first_failure;
      *log << std::endl;
    }
  }
  return out;
}

}  // namespace ldet

#endif  // LDET_SELFTEST_HPP
