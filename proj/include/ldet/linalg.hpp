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

#ifndef LDET_LINALG_HPP
#define LDET_LINALG_HPP

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ldet/ntheory.hpp"

namespace ldet {

// Elimination kernels, generic over anything that exposes field arithmetic on
// a value type. Matrices are dense and row-major.

template <class F>
concept FieldOps = requires(const F& f, typename F::value_type a) {
  { f.zero() } -> std::same_as<typename F::value_type>;
  { f.one() } -> std::same_as<typename F::value_type>;
  { f.add(a, a) } -> std::same_as<typename F::value_type>;
  { f.sub(a, a) } -> std::same_as<typename F::value_type>;
  { f.mul(a, a) } -> std::same_as<typename F::value_type>;
  { f.neg(a) } -> std::same_as<typename F::value_type>;
  { f.inv(a) } -> std::same_as<typename F::value_type>;
  { f.is_zero(a) } -> std::convertible_to<bool>;
};

/// Z/pZ with residues in [0, p), p < 2^32.
struct PrimeFieldOps {
  using value_type = std::uint64_t;
  std::uint64_t p;

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  bool is_zero(value_type a) const { return a == 0; }
  value_type add(value_type a, value_type b) const {
    const value_type s = a + b;
    return s >= p ? s - p : s;
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p - b; }
  value_type neg(value_type a) const { return a == 0 ? 0 : p - a; }
  value_type mul(value_type a, value_type b) const { return a * b % p; }
  value_type inv(value_type a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    return inverse_mod(a, p);
  }
  // a - f*b with a single reduction
  value_type sub_mul(value_type a, value_type f, value_type b) const { return (a + (p - f) * b % p) % p; }
};

namespace detail {

template <FieldOps F>
typename F::value_type sub_mul(const F& f, typename F::value_type a, typename F::value_type c,
                               typename F::value_type b) {
  if constexpr (requires { f.sub_mul(a, c, b); }) {
    return f.sub_mul(a, c, b);
  } else {
    return f.sub(a, f.mul(c, b));
  }
}

}  // namespace detail

/// Gaussian elimination with row pivoting. Consumes its copy of the matrix.
template <FieldOps F>
typename F::value_type determinant(const F& f, std::vector<typename F::value_type> a, std::size_t n) {
  using V = typename F::value_type;
  if (a.size() != n * n) throw std::invalid_argument("determinant: size mismatch");
  V det = f.one();
  bool negate = false;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && f.is_zero(a[pivot * n + c])) ++pivot;
    if (pivot == n) return f.zero();
    if (pivot != c) {
      for (std::size_t j = c; j < n; ++j) std::swap(a[pivot * n + j], a[c * n + j]);
      negate = !negate;
    }
    const V head = a[c * n + c];
    det = f.mul(det, head);
    const V head_inv = f.inv(head);
    const V* top = &a[c * n];
    for (std::size_t r = c + 1; r < n; ++r) {
      V* row = &a[r * n];
      if (f.is_zero(row[c])) continue;
      const V factor = f.mul(row[c], head_inv);
      for (std::size_t j = c + 1; j < n; ++j) row[j] = detail::sub_mul(f, row[j], factor, top[j]);
    }
  }
  return negate ? f.neg(det) : det;
}

/// Pfaffian of a skew-symmetric matrix of even order, normalized so that
/// pf([[0, a], [-a, 0]]) = a. Only the strict upper triangle is read.
///
/// Each step picks a nonzero entry in row k, moves it to column k+1 with a
/// simultaneous row/column swap (flipping the sign), then replaces the trailing
/// block by its Schur complement against the 2x2 pivot block:
///   pf(A) = a_{k,k+1} * pf(S),  S_ij = A_ij + (A_ik A_{k+1,j} - A_{i,k+1} A_kj) / a_{k,k+1}.
/// A row with no nonzero entry means the Pfaffian is zero.
template <FieldOps F>
typename F::value_type pfaffian(const F& f, std::vector<typename F::value_type> a, std::size_t n) {
  using V = typename F::value_type;
  if (a.size() != n * n) throw std::invalid_argument("pfaffian: size mismatch");
  if (n % 2 != 0) throw std::invalid_argument("pfaffian: odd order");
  // upper-triangle accessors; (i, j) with i > j reads -A_ji
  auto get = [&](std::size_t i, std::size_t j) -> V {
    if (i == j) return f.zero();
    return i < j ? a[i * n + j] : f.neg(a[j * n + i]);
  };
  auto set = [&](std::size_t i, std::size_t j, V v) {
    if (i < j) a[i * n + j] = v;
    else a[j * n + i] = f.neg(v);
  };

  V pf = f.one();
  for (std::size_t k = 0; k < n; k += 2) {
    std::size_t pivot = k + 1;
    while (pivot < n && f.is_zero(a[k * n + pivot])) ++pivot;
    if (pivot == n) return f.zero();
    if (pivot != k + 1) {
      const std::size_t s = k + 1, t = pivot;
      for (std::size_t x = k; x < n; ++x) {
        if (x == s || x == t) continue;
        const V xs = get(x, s), xt = get(x, t);
        set(x, s, xt);
        set(x, t, xs);
      }
      set(s, t, get(t, s));
      pf = f.neg(pf);
    }
    const V head = a[k * n + k + 1];
    pf = f.mul(pf, head);
    const V head_inv = f.inv(head);
    const V* row_k = &a[k * n];
    const V* row_k1 = &a[(k + 1) * n];
    for (std::size_t i = k + 2; i < n; ++i) {
      // A_ik = -row_k[i], A_{i,k+1} = -row_k1[i]
      const V ci = f.mul(f.neg(row_k[i]), head_inv);
      const V di = f.mul(row_k1[i], head_inv);
      if (f.is_zero(ci) && f.is_zero(di)) continue;
      V* row_i = &a[i * n];
      for (std::size_t j = i + 1; j < n; ++j) {
        row_i[j] = f.add(row_i[j], f.add(f.mul(ci, row_k1[j]), f.mul(di, row_k[j])));
      }
    }
  }
  return pf;
}

/// Determinant over Z/(p^e) by elimination with minimal-valuation pivots.
inline std::uint64_t determinant_mod_prime_power(std::vector<std::uint64_t> a, std::size_t n, std::uint64_t p,
                                                 unsigned e) {
  std::uint64_t pe = 1;
  for (unsigned i = 0; i < e; ++i) pe *= p;
  for (auto& v : a) v %= pe;
  auto valuation = [&](std::uint64_t v) {
    if (v == 0) return e;
    unsigned val = 0;
    while (v % p == 0) {
      v /= p;
      ++val;
    }
    return val;
  };
  std::uint64_t det = 1 % pe;
  bool negate = false;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    unsigned best = valuation(a[c * n + c]);
    for (std::size_t r = c + 1; r < n && best > 0; ++r) {
      const unsigned v = valuation(a[r * n + c]);
      if (v < best) {
        best = v;
        pivot = r;
      }
    }
    if (best == e) return 0;
    if (pivot != c) {
      for (std::size_t j = c; j < n; ++j) std::swap(a[pivot * n + j], a[c * n + j]);
      negate = !negate;
    }
    const std::uint64_t head = a[c * n + c];
    det = detail::mul_mod(det, head, pe);
    std::uint64_t pv = 1;
    for (unsigned i = 0; i < best; ++i) pv *= p;
    const std::uint64_t unit_inv = inverse_mod(head / pv % pe, pe);
    for (std::size_t r = c + 1; r < n; ++r) {
      const std::uint64_t x = a[r * n + c];
      if (x == 0) continue;
      const std::uint64_t factor = detail::mul_mod(x / pv, unit_inv, pe);
      for (std::size_t j = c; j < n; ++j) {
        const std::uint64_t sub = detail::mul_mod(factor, a[c * n + j], pe);
        a[r * n + j] = (a[r * n + j] + pe - sub) % pe;
      }
    }
  }
  return negate ? (pe - det) % pe : det;
}

/// Sign of a permutation of {0..n-1} by cycle decomposition.
inline int permutation_sign(const std::vector<std::size_t>& perm) {
  std::vector<bool> seen(perm.size(), false);
  std::size_t cycles = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    ++cycles;
    for (std::size_t j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      if (perm[j] >= perm.size()) throw std::invalid_argument("permutation_sign: not a permutation");
    }
  }
  return (perm.size() - cycles) % 2 == 0 ? 1 : -1;
}

}  // namespace ldet

#endif  // LDET_LINALG_HPP
