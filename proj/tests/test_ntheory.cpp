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

#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include "ldet/ntheory.hpp"

using namespace ldet;

namespace {

bool trial_division_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

int euler(std::int64_t a, std::uint64_t p) {
  const std::uint64_t r = detail::pow_mod(detail::reduce(a, p), (p - 1) / 2, p);
  return r == 0 ? 0 : (r == 1 ? 1 : -1);
}

// sign of x -> a x on Z/nZ, by walking cycles
int multiplication_sign(std::uint64_t a, std::uint64_t n) {
  std::vector<bool> seen(n, false);
  std::uint64_t transpositions = 0;
  for (std::uint64_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::uint64_t len = 0;
    for (std::uint64_t x = s; !seen[x]; x = a * x % n) {
      seen[x] = true;
      ++len;
    }
    transpositions += len - 1;
  }
  return transpositions % 2 ? -1 : 1;
}

using Rational = boost::multiprecision::cpp_rational;

// prod_{j=lo}^{hi} f(j), with prod_{lo}^{hi} = 1 / prod_{hi+1}^{lo-1} when hi < lo - 1
template <class F>
Rational range_product(std::int64_t lo, std::int64_t hi, F f) {
  Rational out = 1;
  if (hi >= lo - 1) {
    for (std::int64_t j = lo; j <= hi; ++j) out *= f(j);
  } else {
    for (std::int64_t j = hi + 1; j <= lo - 1; ++j) out /= f(j);
  }
  return out;
}

// F_m(k) read literally for any 0 <= k <= m
Rational fmk_rational(std::int64_t m, std::int64_t k) {
  const Rational pow2 = m - 2 * k >= 0 ? Rational(BigInt(1) << (m - 2 * k)) : Rational(1) / Rational(BigInt(1) << (2 * k - m));
  const Rational descending = range_product(k + 1, m - k, [](std::int64_t j) { return Rational(j); });
  const Rational odd = range_product(k, m - k - 1, [](std::int64_t i) { return Rational(2 * i + 1); });
  return pow2 * descending + odd;
}

}  // namespace

TEST(Primality, SpecExamples) {
  EXPECT_TRUE(is_prime(std::uint64_t{2}));
  EXPECT_FALSE(is_prime(std::uint64_t{4785}));
  EXPECT_TRUE(is_prime(std::uint64_t{401}));
  EXPECT_FALSE(is_prime(std::uint64_t{0}));
  EXPECT_FALSE(is_prime(std::uint64_t{1}));
}

TEST(Primality, AgreesWithTrialDivision) {
  for (std::uint64_t n = 0; n < 20000; ++n) EXPECT_EQ(is_prime(n), trial_division_prime(n)) << n;
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t n = rng() % 4'000'000'000ULL;
    EXPECT_EQ(is_prime(n), trial_division_prime(n)) << n;
  }
}

TEST(Primality, KnownLargeValues) {
  EXPECT_TRUE(is_prime(std::uint64_t{18446744073709551557ULL}));
  EXPECT_FALSE(is_prime(std::uint64_t{3215031751ULL}));  // strong pseudoprime to 2, 3, 5, 7
  EXPECT_TRUE(is_prime(BigInt("170141183460469231731687303715884105727")));
  EXPECT_FALSE(is_prime(BigInt("170141183460469231731687303715884105729")));
}

TEST(PrimesIn, SpecExamples) {
  EXPECT_EQ(primes_in(1, 10), (std::vector<std::uint64_t>{2, 3, 5, 7}));
  EXPECT_EQ(primes_in(1, 30, ResidueFilter{1, 4}), (std::vector<std::uint64_t>{5, 13, 17, 29}));
  EXPECT_TRUE(primes_in(14, 16).empty());
}

TEST(PrimesIn, MatchesTrialDivision) {
  std::vector<std::uint64_t> expected;
  for (std::uint64_t n = 900; n <= 5000; ++n) {
    if (trial_division_prime(n)) expected.push_back(n);
  }
  EXPECT_EQ(primes_in(900, 5000), expected);
}

TEST(Symbols, LegendreSpecExamples) {
  EXPECT_EQ(legendre(1, 5), 1);
  EXPECT_EQ(legendre(5, 5), 0);
  EXPECT_EQ(legendre(2, 5), -1);
  EXPECT_THROW(legendre(1, 9), std::invalid_argument);
  EXPECT_THROW(legendre(1, 2), std::invalid_argument);
}

TEST(Symbols, LegendreMatchesEulerCriterion) {
  for (std::uint64_t p : primes_in(3, 200)) {
    for (std::int64_t a = 0; a < static_cast<std::int64_t>(p); ++a) EXPECT_EQ(legendre(a, p), euler(a, p));
    EXPECT_EQ(legendre(-1, p), euler(-1, p));
  }
}

TEST(Symbols, JacobiSpecExamples) {
  EXPECT_EQ(jacobi(1, 9), 1);
  EXPECT_EQ(jacobi(3, 9), 0);
  EXPECT_EQ(jacobi(2, 15), 1);
  EXPECT_THROW(jacobi(1, 8), std::invalid_argument);
  EXPECT_THROW(jacobi(1, -3), std::invalid_argument);
  EXPECT_THROW(jacobi(1, 0), std::invalid_argument);
}

TEST(Symbols, JacobiIsCompletelyMultiplicative) {
  for (std::int64_t n = 1; n < 120; n += 2) {
    for (std::int64_t a = -30; a < 30; ++a) {
      for (std::int64_t b = -5; b < 6; ++b) EXPECT_EQ(jacobi(a * b, n), jacobi(a, n) * jacobi(b, n));
    }
  }
  for (std::int64_t m = 1; m < 60; m += 2) {
    for (std::int64_t n = 1; n < 60; n += 2) {
      for (std::int64_t a = -10; a < 10; ++a) EXPECT_EQ(jacobi(a, m * n), jacobi(a, m) * jacobi(a, n));
    }
  }
}

TEST(Signs, LerchSpecExamples) {
  EXPECT_EQ(lerch_sign(2, 5), -1);
  EXPECT_EQ(lerch_sign(3, 8), -1);
  EXPECT_EQ(lerch_sign(5, 6), 1);
  EXPECT_THROW(lerch_sign(2, 4), std::invalid_argument);
}

TEST(Signs, LerchMatchesCycleParity) {
  for (std::uint64_t n = 1; n <= 96; ++n) {
    for (std::uint64_t a = 1; a <= n; ++a) {
      if (std::gcd(a, n) != 1) continue;
      EXPECT_EQ(lerch_sign(static_cast<std::int64_t>(a), n), multiplication_sign(a % n, n)) << a << " mod " << n;
    }
  }
}

TEST(Signs, InversionSpecExamples) {
  EXPECT_EQ(inv_sign(5), 1);
  EXPECT_EQ(inv_sign(7), -1);
  EXPECT_EQ(inv_sign(13), 1);
  EXPECT_THROW(inv_sign(15), std::invalid_argument);
  EXPECT_THROW(inv_sign(8), std::invalid_argument);
}

TEST(Signs, HuangPanSpecExamples) {
  EXPECT_EQ(huang_pan_sign(1, 13), 1);
  EXPECT_EQ(huang_pan_sign(4, 5), 1);
  EXPECT_EQ(huang_pan_sign(2, 13), -1);
  EXPECT_THROW(huang_pan_sign(13, 13), std::invalid_argument);
}

TEST(PrimePowers, Recognition) {
  EXPECT_EQ(as_prime_power(343)->p, 7u);
  EXPECT_EQ(as_prime_power(343)->k, 3u);
  EXPECT_EQ(as_prime_power(13)->k, 1u);
  EXPECT_FALSE(as_prime_power(15));
  EXPECT_FALSE(as_prime_power(1));
  EXPECT_EQ(as_prime_power(1024)->p, 2u);
}

TEST(Factorials, SpecExamples) {
  EXPECT_EQ(factorial_mod(0, 7), 1u);
  EXPECT_EQ(factorial_mod(6, 13), 5u);
  EXPECT_EQ(factorial_mod(12, 5), 0u);
}

TEST(Factorials, HalfFactorialSquaresToMinusOne) {
  for (std::uint64_t p : primes_in(5, 1000, ResidueFilter{1, 4})) {
    const std::uint64_t h = factorial_mod((p - 1) / 2, p);
    EXPECT_EQ(h * h % p, p - 1) << p;
  }
}

TEST(Factorials, BinomialMatchesPascal) {
  for (std::uint64_t p : {3u, 5u, 7u, 11u, 13u}) {
    std::vector<std::vector<std::uint64_t>> row(60);
    for (std::uint64_t n = 0; n < 60; ++n) {
      row[n].assign(n + 1, 1);
      for (std::uint64_t k = 1; k < n; ++k) row[n][k] = (row[n - 1][k - 1] + row[n - 1][k]) % p;
      for (std::uint64_t k = 0; k <= n; ++k) EXPECT_EQ(binomial_mod(n, k, p), row[n][k]);
      EXPECT_EQ(binomial_mod(n, n + 1, p), 0u);
    }
  }
}

TEST(Inverse, ModularInverse) {
  EXPECT_EQ(inverse_mod(4, 13), 10u);
  EXPECT_THROW(inverse_mod(6, 9), std::domain_error);
}

TEST(Fmk, SpecExamples) {
  EXPECT_EQ(fmk(5, 0).value, 4785);
  EXPECT_EQ(fmk(1, 0).value, 3);
  EXPECT_EQ(fmk(5, 2).value, 11);
  EXPECT_THROW(fmk(5, 3), std::invalid_argument);
  EXPECT_THROW(fmk(4, 0), std::invalid_argument);
}

TEST(Fmk, AgreesWithRationalReading) {
  for (std::int64_t m = 1; m <= 13; m += 2) {
    for (std::int64_t k = 0; k <= (m - 1) / 2; ++k) {
      EXPECT_EQ(Rational(fmk(static_cast<unsigned>(m), static_cast<unsigned>(k)).value), fmk_rational(m, k));
    }
  }
}

// Reversed orientation: F(m-k) = F(k) / (2^(m-2k) prod_{k+1}^{m-k} j prod_{i=k}^{m-k-1} (2i+1)).
TEST(Fmk, SymmetricOrientation) {
  for (std::int64_t m = 1; m <= 13; m += 2) {
    for (std::int64_t k = 0; k <= (m - 1) / 2; ++k) {
      const Rational scale = Rational(BigInt(1) << (m - 2 * k)) *
                             range_product(k + 1, m - k, [](std::int64_t j) { return Rational(j); }) *
                             range_product(k, m - k - 1, [](std::int64_t i) { return Rational(2 * i + 1); });
      EXPECT_EQ(fmk_rational(m, m - k) * scale, fmk_rational(m, k)) << m << "," << k;
    }
  }
}

TEST(Fmk, FactorialFormAtMinusHalf) {
  // F_m(k) = 2^(m-2k) [(m-k)!/k! + (h+m-k)!/(h+k)!] evaluated at h = -1/2
  for (std::int64_t m = 1; m <= 13; m += 2) {
    for (std::int64_t k = 0; k <= (m - 1) / 2; ++k) {
      const Rational h(-1, 2);
      const Rational a = range_product(k + 1, m - k, [](std::int64_t j) { return Rational(j); });
      const Rational b = range_product(k + 1, m - k, [&](std::int64_t j) { return h + j; });
      const Rational value = Rational(BigInt(1) << (m - 2 * k)) * (a + b);
      EXPECT_EQ(value, Rational(fmk(static_cast<unsigned>(m), static_cast<unsigned>(k)).value));
    }
  }
}

TEST(Fmk, BoundIsMaximum) {
  for (unsigned m = 1; m <= 13; m += 2) {
    BigInt best = 0;
    for (unsigned k = 0; k <= (m - 1) / 2; ++k) best = std::max(best, fmk(m, k).value);
    EXPECT_EQ(fmk_bound(m), best);
  }
}

TEST(Factorize, SpecExamples) {
  const auto one = factorize(1);
  EXPECT_TRUE(one.factors.empty());
  EXPECT_TRUE(one.complete);
  const auto f = factorize(4785);
  EXPECT_EQ(f.factors, (std::map<BigInt, unsigned>{{3, 1}, {5, 1}, {11, 1}, {29, 1}}));
  EXPECT_TRUE(f.complete);
  EXPECT_EQ(factorize(16).factors, (std::map<BigInt, unsigned>{{2, 4}}));
}

TEST(Factorize, ReconstructsProducts) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    BigInt n = 1;
    std::map<BigInt, unsigned> expected;
    for (int i = 0; i < 3; ++i) {
      std::uint64_t p = (rng() % 5'000'000'000ULL) | 1;
      while (!is_prime(p)) p += 2;
      n *= p;
      ++expected[p];
    }
    const auto f = factorize(n);
    EXPECT_TRUE(f.complete);
    EXPECT_EQ(f.factors, expected) << n;
  }
}

TEST(Factorize, FmkValuesAreComplete) {
  for (unsigned m = 1; m <= 13; m += 2) {
    for (unsigned k = 0; k <= (m - 1) / 2; ++k) {
      const auto f = factorize(fmk(m, k).value);
      EXPECT_TRUE(f.complete);
      BigInt prod = 1;
      for (const auto& [p, e] : f.factors) {
        EXPECT_TRUE(is_prime(p));
        for (unsigned i = 0; i < e; ++i) prod *= p;
      }
      EXPECT_EQ(prod, fmk(m, k).value);
    }
  }
}
