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

#ifndef LDET_MATRIX_HPP
#define LDET_MATRIX_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldet/field.hpp"
#include "ldet/linalg.hpp"
#include "ldet/ntheory.hpp"

namespace ldet {

/// Dense square matrix over a FieldCtx, entries stored packed.
class MatrixOverField {
 public:
  MatrixOverField(Field ctx, std::size_t n) : ctx_(std::move(ctx)), n_(n), a_(n * n, 0) {}
  MatrixOverField(Field ctx, std::size_t n, std::vector<Raw> entries)
      : ctx_(std::move(ctx)), n_(n), a_(std::move(entries)) {
    if (a_.size() != n_ * n_) throw std::invalid_argument("matrix: entry count is not n*n");
    for (Raw v : a_) {
      if (!ctx_->contains(v)) throw std::invalid_argument("matrix: entry outside field");
    }
  }

  const Field& ctx() const { return ctx_; }
  std::size_t order() const { return n_; }
  Raw raw(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, Raw v) { a_[i * n_ + j] = v; }
  FieldElem at(std::size_t i, std::size_t j) const { return {ctx_, raw(i, j)}; }
  const std::vector<Raw>& data() const { return a_; }

  bool is_skew_symmetric() const {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i; j < n_; ++j) {
        if (raw(i, j) != ctx_->neg(raw(j, i))) return false;
      }
    }
    return true;
  }

  bool is_symmetric() const {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        if (raw(i, j) != raw(j, i)) return false;
      }
    }
    return true;
  }

  /// B_ij = A_{perm[i], perm[j]}
  MatrixOverField permuted(std::span<const std::size_t> perm) const {
    if (perm.size() != n_) throw std::invalid_argument("matrix: permutation size mismatch");
    MatrixOverField out(ctx_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) out.set(i, j, raw(perm[i], perm[j]));
    }
    return out;
  }

  std::string to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) os << (j ? " " : "") << ctx_->format(raw(i, j));
      os << '\n';
    }
    return os.str();
  }

 private:
  Field ctx_;
  std::size_t n_;
  std::vector<Raw> a_;
};

inline FieldElem det(const MatrixOverField& m) {
  const Field& f = m.ctx();
  if (f->degree() == 1) return {f, determinant(PrimeFieldOps{f->characteristic()}, m.data(), m.order())};
  return {f, determinant(*f, m.data(), m.order())};
}

inline FieldElem pfaffian(const MatrixOverField& m) {
  if (m.order() % 2 != 0) throw std::invalid_argument("pfaffian: odd order");
  if (!m.is_skew_symmetric()) throw std::invalid_argument("pfaffian: matrix is not skew-symmetric");
  const Field& f = m.ctx();
  if (f->degree() == 1) return {f, pfaffian(PrimeFieldOps{f->characteristic()}, m.data(), m.order())};
  return {f, pfaffian(*f, m.data(), m.order())};
}

/// Matrix over Z/nZ for odd composite n; evaluated through its prime-power parts.
struct ResidueMatrix {
  std::uint64_t modulus;
  std::size_t n;
  std::vector<std::uint64_t> entries;
};

/// det mod n, combining det mod p^e for each p^e || n by CRT.
inline std::uint64_t det_mod(const ResidueMatrix& m) {
  const Factorization fac = factorize(BigInt(m.modulus));
  std::uint64_t result = 0, acc_mod = 1;
  for (const auto& [prime, e] : fac.factors) {
    const auto p = static_cast<std::uint64_t>(prime);
    std::uint64_t pe = 1;
    for (unsigned i = 0; i < e; ++i) pe *= p;
    const std::uint64_t r = determinant_mod_prime_power(m.entries, m.n, p, e);
    // x = result (mod acc_mod), x = r (mod pe)
    const std::uint64_t diff = (r + pe - result % pe) % pe;
    const std::uint64_t t = detail::mul_mod(diff, inverse_mod(acc_mod % pe, pe), pe);
    result += acc_mod * t;
    acc_mod *= pe;
  }
  return result % m.modulus;
}

// ---------------------------------------------------------------------------
// Matrix families. Entries are reduced before powering.

namespace detail {

// x^m * phi(x) = x^(m + (q-1)/2) for x != 0, and 0 at x = 0.
inline Raw weighted_power(const FieldCtx& f, Raw x, std::uint64_t m) {
  if (x == 0) return 0;
  return f.pow(x, m + (f.order() - 1) / 2);
}

inline void require_odd_prime(std::uint64_t p, const char* what) {
  if (p < 3 || p % 2 == 0 || !is_prime(p)) throw std::invalid_argument(std::string(what) + ": p must be an odd prime");
}

}  // namespace detail

/// [(a_i + d a_j)^m phi(a_i + d a_j)] over the given enumeration of the squares.
inline MatrixOverField build_T_tilde(const FieldElem& d, std::uint64_t m, std::span<const Raw> enumeration) {
  if (d.is_zero()) throw std::invalid_argument("build_T_tilde: d must be nonzero");
  const FieldCtx& f = *d.ctx();
  const std::size_t n = enumeration.size();
  MatrixOverField out(d.ctx(), n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Raw base = f.add(enumeration[i], f.mul(d.raw(), enumeration[j]));
      out.set(i, j, detail::weighted_power(f, base, m));
    }
  }
  return out;
}

/// T~_m(d, q) matrix with the squares in canonical order.
inline MatrixOverField build_T_tilde(const Field& ctx, const FieldElem& d, std::uint64_t m) {
  if (!d.ctx()->same_as(*ctx)) throw std::invalid_argument("build_T_tilde: d from another field");
  const std::vector<Raw> sq = ctx->squares_raw();
  return build_T_tilde(FieldElem(ctx, d.raw()), m, sq);
}

/// [(i^2 + d j^2)^m ((i^2 + d j^2)/p)], 1 <= i, j <= (p-1)/2, over F_p.
inline MatrixOverField build_T(std::uint64_t p, std::int64_t d, std::uint64_t m) {
  detail::require_odd_prime(p, "build_T");
  const Field f = field_create(p);
  const Raw dd = f->from_int(d);
  if (dd == 0) throw std::invalid_argument("build_T: p divides d");
  const std::size_t n = (p - 1) / 2;
  MatrixOverField out(f, n);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const Raw base = f->add(i * i % p, f->mul(dd, j * j % p));
      out.set(i - 1, j - 1, detail::weighted_power(*f, base, m));
    }
  }
  return out;
}

/// [(i^2 - j^2)^m ((i^2 - j^2)/p)] over F_p for prime p.
inline MatrixOverField build_D(std::uint64_t p, std::uint64_t m) {
  detail::require_odd_prime(p, "build_D");
  const Field f = field_create(p);
  const std::size_t n = (p - 1) / 2;
  MatrixOverField out(f, n);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const Raw base = f->sub(i * i % p, j * j % p);
      out.set(i - 1, j - 1, detail::weighted_power(*f, base, m));
    }
  }
  return out;
}

/// Same family for any odd n >= 3 over Z/nZ, with the Jacobi symbol.
inline ResidueMatrix build_D_residue(std::uint64_t n_odd, std::uint64_t m) {
  if (n_odd < 3 || n_odd % 2 == 0) throw std::invalid_argument("build_D: n must be odd and at least 3");
  const std::size_t n = (n_odd - 1) / 2;
  ResidueMatrix out{n_odd, n, std::vector<std::uint64_t>(n * n, 0)};
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const std::int64_t diff = static_cast<std::int64_t>(i * i) - static_cast<std::int64_t>(j * j);
      const int symbol = jacobi(diff, static_cast<std::int64_t>(n_odd));
      if (symbol == 0) continue;
      const std::uint64_t v = detail::pow_mod(detail::reduce(diff, n_odd), m, n_odd);
      out.entries[(i - 1) * n + (j - 1)] = symbol == 1 ? v : (n_odd - v) % n_odd;
    }
  }
  return out;
}

/// e = 0: [((i^2 + d j^2)/p)]; (p-1)/2 <= e <= p-1: [(i^2 + d j^2)^e].
inline MatrixOverField build_S(std::uint64_t p, std::int64_t d, std::uint64_t e) {
  detail::require_odd_prime(p, "build_S");
  if (e != 0 && (e < (p - 1) / 2 || e > p - 1)) throw std::invalid_argument("build_S: exponent out of range");
  const Field f = field_create(p);
  const Raw dd = f->from_int(d);
  const std::size_t n = (p - 1) / 2;
  MatrixOverField out(f, n);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const Raw base = f->add(i * i % p, f->mul(dd, j * j % p));
      Raw v = 0;
      if (e == 0) {
        const int s = f->quad_char(base);
        v = s == 0 ? 0 : (s == 1 ? 1 : p - 1);
      } else {
        v = f->pow(base, e);
      }
      out.set(i - 1, j - 1, v);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

struct SquareClassResult {
  FieldElem value;
  FieldElem coefficient;
  bool holds = false;
  bool degenerate_zero = false;
  /// value * coefficient^-1 when the coefficient is nonzero.
  std::optional<FieldElem> ratio;
  std::optional<FieldElem> witness;
};

/// Is value = coefficient * x^2 for some x? A zero coefficient only admits a
/// zero value, flagged as degenerate.
inline SquareClassResult square_class_equal(const FieldElem& value, const FieldElem& coefficient) {
  if (!value.ctx()->same_as(*coefficient.ctx())) throw std::invalid_argument("square_class_equal: mixed fields");
  SquareClassResult r{value, coefficient, false, false, std::nullopt, std::nullopt};
  const Field& f = value.ctx();
  if (coefficient.is_zero()) {
    r.holds = value.is_zero();
    r.degenerate_zero = r.holds;
    if (r.holds) r.witness = zero(f);
    return r;
  }
  r.ratio = value / coefficient;
  r.holds = quad_char(*r.ratio) >= 0;
  if (r.holds && !value.is_zero()) r.witness = sqrt(*r.ratio);
  return r;
}

}  // namespace ldet

#endif  // LDET_MATRIX_HPP
