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

#ifndef LDET_NTHEORY_HPP
#define LDET_NTHEORY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ldet {

using BigInt = boost::multiprecision::cpp_int;

/// Rounds of Miller-Rabin used for integers at or above 2^64.
inline constexpr int kProbabilisticRounds = 40;

/// Trial division covers every prime below this bound before Pollard-rho starts.
inline constexpr std::uint64_t kTrialDivisionBound = 1'000'000;

/// Pollard-rho effort budget: reseeds, and iterations per seed.
inline constexpr int kRhoReseeds = 48;
inline constexpr std::uint64_t kRhoIterationCap = std::uint64_t{1} << 22;

namespace detail {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, base, m);
    base = mul_mod(base, base, m);
    e >>= 1;
  }
  return r;
}

inline std::uint64_t reduce(std::int64_t a, std::uint64_t m) {
  if (a >= 0) return static_cast<std::uint64_t>(a) % m;
  // -(a+1) avoids overflow at INT64_MIN
  std::uint64_t neg = (static_cast<std::uint64_t>(-(a + 1)) % m + 1) % m;
  return neg == 0 ? 0 : m - neg;
}

inline bool miller_rabin_round(std::uint64_t n, std::uint64_t a, std::uint64_t d, int s) {
  std::uint64_t x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

// Primes below kTrialDivisionBound, built once.
inline const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> composite(kTrialDivisionBound, false);
    std::vector<std::uint32_t> out;
    for (std::uint64_t i = 2; i < kTrialDivisionBound; ++i) {
      if (composite[i]) continue;
      out.push_back(static_cast<std::uint32_t>(i));
      for (std::uint64_t j = i * i; j < kTrialDivisionBound; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

inline bool fits_u64(const BigInt& n) {
  return n >= 0 && n <= BigInt(std::numeric_limits<std::uint64_t>::max());
}

}  // namespace detail

/// Deterministic for every 64-bit input (fixed witness set valid far beyond 2^64).
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (!detail::miller_rabin_round(n, a, d, s)) return false;
  }
  return true;
}

/// Exact below 2^64; above that, kProbabilisticRounds Miller-Rabin rounds with
/// bases drawn from a fixed-seed generator, so results are reproducible.
inline bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  if (detail::fits_u64(n)) return is_prime(static_cast<std::uint64_t>(n));
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n % p == 0) return false;
  }
  BigInt d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  std::mt19937_64 rng(0x5eed'1d37ULL);
  const BigInt span = n - 3;
  for (int round = 0; round < kProbabilisticRounds; ++round) {
    BigInt a = 0;
    for (int limb = 0; limb < 4; ++limb) a = (a << 64) + rng();
    a = a % span + 2;
    BigInt x = boost::multiprecision::powm(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (unsigned r = 1; r < s; ++r) {
      x = x * x % n;
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

struct ResidueFilter {
  std::uint64_t residue;
  std::uint64_t modulus;
};

/// Primes in [lo, hi], ascending, optionally restricted to p = residue (mod modulus).
inline std::vector<std::uint64_t> primes_in(std::int64_t lo, std::int64_t hi,
                                            std::optional<ResidueFilter> filter = std::nullopt) {
  if (lo > hi) throw std::invalid_argument("primes_in: lo > hi");
  if (filter && filter->modulus == 0) throw std::invalid_argument("primes_in: zero modulus");
  std::vector<std::uint64_t> out;
  if (hi < 2) return out;
  const auto start = static_cast<std::uint64_t>(std::max<std::int64_t>(lo, 2));
  const auto stop = static_cast<std::uint64_t>(hi);
  auto keep = [&](std::uint64_t p) {
    return !filter || p % filter->modulus == filter->residue % filter->modulus;
  };
  // Segmented sieve for modest ranges, per-candidate testing otherwise.
  if (stop - start <= (std::uint64_t{1} << 26) && stop < (std::uint64_t{1} << 40)) {
    std::vector<bool> composite(stop - start + 1, false);
    for (std::uint64_t f = 2; f * f <= stop; ++f) {
      std::uint64_t first = std::max(f * f, (start + f - 1) / f * f);
      for (std::uint64_t j = first; j <= stop; j += f) composite[j - start] = true;
    }
    for (std::uint64_t v = start; v <= stop; ++v) {
      if (!composite[v - start] && keep(v)) out.push_back(v);
    }
    return out;
  }
  for (std::uint64_t v = start;; ++v) {
    if (is_prime(v) && keep(v)) out.push_back(v);
    if (v == stop) break;
  }
  return out;
}

/// Jacobi symbol (a/n) for odd n >= 1, binary reciprocity, no factoring.
inline int jacobi(std::int64_t a, std::int64_t n) {
  if (n <= 0 || n % 2 == 0) throw std::invalid_argument("jacobi: n must be odd and positive");
  auto m = static_cast<std::uint64_t>(n);
  std::uint64_t x = detail::reduce(a, m);
  int result = 1;
  while (x != 0) {
    while ((x & 1) == 0) {
      x >>= 1;
      const std::uint64_t r = m & 7;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(x, m);
    if ((x & 3) == 3 && (m & 3) == 3) result = -result;
    x %= m;
  }
  return m == 1 ? result : 0;
}

/// Legendre symbol (a/p); p must be an odd prime.
inline int legendre(std::int64_t a, std::uint64_t p) {
  if (p < 3 || p % 2 == 0 || !is_prime(p)) throw std::invalid_argument("legendre: p must be an odd prime");
  return jacobi(a, static_cast<std::int64_t>(p));
}

/// Sign of x -> a*x on Z/nZ.
inline int lerch_sign(std::int64_t a, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("lerch_sign: n must be positive");
  if (std::gcd(detail::reduce(a, n), n) != 1 && n != 1) {
    throw std::invalid_argument("lerch_sign: gcd(a, n) != 1");
  }
  if (n % 2 == 1) return jacobi(a, static_cast<std::int64_t>(n));
  if (n % 4 == 2) return 1;
  return detail::reduce(a, 4) == 1 ? 1 : -1;
}

struct PrimePower {
  std::uint64_t p;
  unsigned k;
};

inline std::optional<PrimePower> as_prime_power(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  for (unsigned k = 63; k >= 1; --k) {
    // integer k-th root by floating estimate, then correction
    auto r = static_cast<std::uint64_t>(std::llround(std::pow(static_cast<double>(q), 1.0 / k)));
    for (std::uint64_t c = (r > 1 ? r - 1 : 1); c <= r + 1; ++c) {
      if (c < 2) continue;
      unsigned __int128 v = 1;
      bool over = false;
      for (unsigned i = 0; i < k; ++i) {
        v *= c;
        if (v > q) {
          over = true;
          break;
        }
      }
      if (!over && v == q && is_prime(c)) return PrimePower{c, k};
    }
  }
  return std::nullopt;
}

/// Sign of x -> 1/x on the nonzero squares of F_q, i.e. (-1)^((q-3)(q-5)/8).
inline int inv_sign(std::uint64_t q) {
  auto pp = as_prime_power(q);
  if (!pp || pp->p == 2) throw std::invalid_argument("inv_sign: q must be an odd prime power");
  const unsigned __int128 e = static_cast<unsigned __int128>(q - 3) * (q - 5) / 8;
  return (e & 1) ? -1 : 1;
}

/// Sign of the folded multiplication k -> r, a*k = +-r (mod p), on {1..(p-1)/2}.
inline int huang_pan_sign(std::int64_t a, std::uint64_t p) {
  const int chi = legendre(a, p);
  if (chi == 0) throw std::invalid_argument("huang_pan_sign: p divides a");
  if (chi == 1) return 1;
  return ((p + 1) / 2) % 2 == 0 ? 1 : -1;
}

/// n! mod p; zero once n >= p.
inline std::uint64_t factorial_mod(std::uint64_t n, std::uint64_t p) {
  if (p == 1) return 0;
  if (n >= p) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 2; i <= n; ++i) r = detail::mul_mod(r, i, p);
  return r;
}

inline std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
  while (new_r != 0) {
    const std::int64_t quot = r / new_r;
    t = std::exchange(new_t, t - quot * new_t);
    r = std::exchange(new_r, r - quot * new_r);
  }
  if (r != 1) throw std::domain_error("inverse_mod: not invertible");
  return detail::reduce(t, m);
}

/// C(n, k) mod p by Lucas; each digit binomial from factorials mod p.
inline std::uint64_t binomial_mod(std::uint64_t n, std::uint64_t k, std::uint64_t p) {
  if (k > n) return 0;
  std::uint64_t result = 1;
  while (n || k) {
    const std::uint64_t ni = n % p, ki = k % p;
    if (ki > ni) return 0;
    const std::uint64_t num = factorial_mod(ni, p);
    const std::uint64_t den = detail::mul_mod(factorial_mod(ki, p), factorial_mod(ni - ki, p), p);
    result = detail::mul_mod(result, detail::mul_mod(num, inverse_mod(den, p), p), p);
    n /= p;
    k /= p;
  }
  return result;
}

// ---------------------------------------------------------------------------
// F_m(k)

struct FmkValue {
  unsigned m;
  unsigned k;
  BigInt value;
};

/// F_m(k) = 2^(m-2k) (m-k)(m-k-1)...(k+1) + (2m-2k-1)(2m-2k-3)...(2k+1)
/// for odd m and 0 <= k <= (m-1)/2. At k = (m-1)/2 each product is the single
/// factor (m+1)/2 resp. m.
inline FmkValue fmk(unsigned m, unsigned k) {
  if (m % 2 == 0) throw std::invalid_argument("fmk: m must be odd");
  if (k > (m - 1) / 2) throw std::invalid_argument("fmk: k out of range");
  BigInt falling = 1;
  for (unsigned j = k + 1; j <= m - k; ++j) falling *= j;
  BigInt odd = 1;
  for (unsigned j = 2 * k + 1; j <= 2 * m - 2 * k - 1; j += 2) odd *= j;
  return {m, k, (BigInt(1) << (m - 2 * k)) * falling + odd};
}

/// max_k F_m(k); primes beyond it never divide D_p^(m).
inline BigInt fmk_bound(unsigned m) {
  BigInt best = 0;
  for (unsigned k = 0; k <= (m - 1) / 2; ++k) best = std::max(best, fmk(m, k).value);
  return best;
}

// ---------------------------------------------------------------------------
// Factorization

struct Factorization {
  BigInt n;
  std::map<BigInt, unsigned> factors;
  bool complete = true;
  /// Composite cofactors left when the effort budget ran out.
  std::vector<BigInt> unresolved;
};

namespace detail {

inline std::uint64_t rho_gcd(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }
inline BigInt rho_gcd(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }
inline std::uint64_t rho_mul(std::uint64_t a, std::uint64_t b, std::uint64_t n) { return mul_mod(a, b, n); }
inline BigInt rho_mul(const BigInt& a, const BigInt& b, const BigInt& n) { return a * b % n; }
// a, b < n; safe when n is close to 2^64
inline std::uint64_t rho_add(std::uint64_t a, std::uint64_t b, std::uint64_t n) { return a >= n - b ? a - (n - b) : a + b; }
inline BigInt rho_add(const BigInt& a, const BigInt& b, const BigInt& n) { return (a + b) % n; }
inline std::uint64_t rho_absdiff(std::uint64_t a, std::uint64_t b) { return a > b ? a - b : b - a; }
inline BigInt rho_absdiff(const BigInt& a, const BigInt& b) { return a > b ? BigInt(a - b) : BigInt(b - a); }

// Brent's cycle detection on x -> x^2 + c. Returns a nontrivial factor or 0.
template <class Int>
Int brent_factor(const Int& n, const Int& x0, const Int& c, std::uint64_t cap) {
  constexpr std::uint64_t kBlock = 128;
  Int y = x0, x = x0, ys = x0, q = 1, g = 1;
  std::uint64_t r = 1, iterations = 0;
  auto step = [&](const Int& v) { return rho_add(rho_mul(v, v, n), c, n); };
  do {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) y = step(y);
    std::uint64_t k = 0;
    do {
      ys = y;
      const std::uint64_t lim = std::min(kBlock, r - k);
      for (std::uint64_t i = 0; i < lim; ++i) {
        y = step(y);
        q = rho_mul(q, rho_absdiff(x, y), n);
      }
      g = rho_gcd(q, n);
      k += lim;
      iterations += lim;
    } while (k < r && g == 1);
    r *= 2;
    if (iterations > cap) return Int(0);
  } while (g == 1);
  if (g == n) {
    do {
      ys = step(ys);
      g = rho_gcd(rho_absdiff(x, ys), n);
    } while (g == 1);
  }
  return g == n ? Int(0) : g;
}

inline std::optional<BigInt> find_factor(const BigInt& n) {
  std::mt19937_64 rng(0xfac7'0123ULL);
  for (int attempt = 0; attempt < kRhoReseeds; ++attempt) {
    if (fits_u64(n)) {
      const auto nn = static_cast<std::uint64_t>(n);
      const std::uint64_t f = brent_factor<std::uint64_t>(nn, rng() % nn, rng() % (nn - 1) + 1, kRhoIterationCap);
      if (f != 0) return BigInt(f);
    } else {
      const BigInt f = brent_factor<BigInt>(n, BigInt(rng()) % n, BigInt(rng()) % (n - 1) + 1, kRhoIterationCap);
      if (f != 0) return f;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Trial division below kTrialDivisionBound, then Pollard-rho (Brent) within a
/// fixed budget. Leftover composites are reported through `complete`/`unresolved`.
inline Factorization factorize(const BigInt& n) {
  if (n < 1) throw std::invalid_argument("factorize: n must be positive");
  Factorization out{n, {}, true, {}};
  BigInt rest = n;
  for (std::uint32_t p : detail::small_primes()) {
    if (BigInt(p) * p > rest) break;
    if (rest % p != 0) continue;
    unsigned e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    out.factors[BigInt(p)] = e;
  }
  if (rest == 1) return out;
  std::vector<BigInt> pending{rest};
  while (!pending.empty()) {
    BigInt c = pending.back();
    pending.pop_back();
    if (c == 1) continue;
    if (is_prime(c)) {
      ++out.factors[c];
      continue;
    }
    auto f = detail::find_factor(c);
    if (!f) {
      out.complete = false;
      out.unresolved.push_back(c);
      continue;
    }
    pending.push_back(*f);
    pending.push_back(c / *f);
  }
  std::sort(out.unresolved.begin(), out.unresolved.end());
  return out;
}

inline std::string to_string(const BigInt& v) { return v.str(); }

}  // namespace ldet

#endif  // LDET_NTHEORY_HPP
