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

#ifndef LDET_FIELD_HPP
#define LDET_FIELD_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldet/ntheory.hpp"

namespace ldet {

/// Packed field element: coefficient i of the representative polynomial is
/// digit i of the integer in base p. For prime fields this is the residue.
using Raw = std::uint64_t;

inline constexpr unsigned kMaxExtensionDegree = 16;

class FieldCtx;
using Field = std::shared_ptr<const FieldCtx>;

namespace detail {

using Poly = std::vector<std::uint64_t>;  // low degree first, over F_p

inline void poly_trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline Poly poly_mod(Poly a, const Poly& f, std::uint64_t p) {
  poly_trim(a);
  const std::size_t df = f.size() - 1;
  const std::uint64_t lead_inv = inverse_mod(f.back(), p);
  while (a.size() > df) {
    const std::uint64_t factor = mul_mod(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - 1 - df;
    for (std::size_t i = 0; i <= df; ++i) {
      a[shift + i] = (a[shift + i] + p - mul_mod(factor, f[i], p)) % p;
    }
    poly_trim(a);
  }
  return a;
}

inline Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + mul_mod(a[i], b[j], p)) % p;
  }
  return poly_mod(std::move(prod), f, p);
}

// x^(p^e) mod f by repeated p-th powering.
inline Poly frobenius_power_of_x(const Poly& f, std::uint64_t p, unsigned e) {
  Poly x = poly_mod(Poly{0, 1}, f, p);
  for (unsigned round = 0; round < e; ++round) {
    Poly result{1}, base = x;
    for (std::uint64_t n = p; n; n >>= 1) {
      if (n & 1) result = poly_mulmod(result, base, f, p);
      base = poly_mulmod(base, base, f, p);
    }
    x = result;
  }
  return x;
}

inline Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Rabin's test: f | x^(p^k) - x and gcd(x^(p^(k/r)) - x, f) = 1 for primes r | k.
inline bool is_irreducible(const Poly& f, std::uint64_t p) {
  const unsigned k = static_cast<unsigned>(f.size() - 1);
  if (k == 0) return false;
  if (k == 1) return true;
  auto x_minus = [&](Poly g) {
    if (g.size() < 2) g.resize(2, 0);
    g[1] = (g[1] + p - 1) % p;
    poly_trim(g);
    return g;
  };
  if (!x_minus(frobenius_power_of_x(f, p, k)).empty()) return false;
  for (unsigned r = 2; r <= k; ++r) {
    if (k % r != 0 || !is_prime(std::uint64_t{r})) continue;
    Poly g = poly_gcd(f, x_minus(frobenius_power_of_x(f, p, k / r)), p);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace detail

/// F_q for odd q = p^k. Immutable after construction and shared by handle.
class FieldCtx {
 public:
  using value_type = Raw;

  FieldCtx(std::uint64_t p, unsigned k) : p_(p), k_(k) {
    if (p < 3 || p % 2 == 0 || !is_prime(p)) throw std::invalid_argument("field: characteristic must be an odd prime");
    if (k < 1 || k > kMaxExtensionDegree) throw std::invalid_argument("field: unsupported extension degree");
    if (p >= (std::uint64_t{1} << 32)) throw std::invalid_argument("field: characteristic must be below 2^32");
    unsigned __int128 q = 1;
    for (unsigned i = 0; i < k; ++i) {
      pow_[i] = static_cast<std::uint64_t>(q);
      q *= p;
      if (q >= (static_cast<unsigned __int128>(1) << 63)) throw std::invalid_argument("field: order too large");
    }
    q_ = static_cast<std::uint64_t>(q);
    if (k == 1) {
      modulus_ = {0, 1};
    } else {
      modulus_ = smallest_irreducible();
      if (!detail::is_irreducible(modulus_, p_)) throw std::logic_error("field: modulus not irreducible");
    }
  }

  std::uint64_t characteristic() const { return p_; }
  unsigned degree() const { return k_; }
  std::uint64_t order() const { return q_; }
  /// Monic, low degree first, length degree()+1.
  const std::vector<std::uint64_t>& modulus() const { return modulus_; }

  bool same_as(const FieldCtx& other) const {
    return this == &other || (p_ == other.p_ && k_ == other.k_ && modulus_ == other.modulus_);
  }

  Raw zero() const { return 0; }
  Raw one() const { return 1; }
  bool is_zero(Raw a) const { return a == 0; }

  Raw add(Raw a, Raw b) const {
    if (k_ == 1) {
      const Raw s = a + b;
      return s >= p_ ? s - p_ : s;
    }
    Raw out = 0;
    for (unsigned i = 0; i < k_; ++i) {
      const std::uint64_t s = digit(a, i) + digit(b, i);
      out += (s >= p_ ? s - p_ : s) * pow_[i];
    }
    return out;
  }

  Raw neg(Raw a) const {
    if (k_ == 1) return a == 0 ? 0 : p_ - a;
    Raw out = 0;
    for (unsigned i = 0; i < k_; ++i) {
      const std::uint64_t d = digit(a, i);
      out += (d == 0 ? 0 : p_ - d) * pow_[i];
    }
    return out;
  }

  Raw sub(Raw a, Raw b) const { return add(a, neg(b)); }

  Raw mul(Raw a, Raw b) const {
    if (k_ == 1) return a * b % p_;
    std::array<std::uint64_t, kMaxExtensionDegree> x{}, y{};
    std::array<std::uint64_t, 2 * kMaxExtensionDegree> prod{};
    for (unsigned i = 0; i < k_; ++i) {
      x[i] = digit(a, i);
      y[i] = digit(b, i);
    }
    for (unsigned i = 0; i < k_; ++i) {
      if (x[i] == 0) continue;
      for (unsigned j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p_;
    }
    // modulus is monic: x^k = -(m_0 + ... + m_{k-1} x^{k-1})
    for (unsigned top = 2 * k_ - 2; top >= k_; --top) {
      const std::uint64_t c = prod[top];
      if (c == 0) continue;
      prod[top] = 0;
      for (unsigned i = 0; i < k_; ++i) {
        prod[top - k_ + i] = (prod[top - k_ + i] + (p_ - c) * modulus_[i]) % p_;
      }
    }
    Raw out = 0;
    for (unsigned i = 0; i < k_; ++i) out += prod[i] * pow_[i];
    return out;
  }

  Raw pow(Raw a, std::uint64_t e) const {
    Raw r = one();
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  Raw inv(Raw a) const {
    if (a == 0) throw std::domain_error("field: inverse of zero");
    if (k_ == 1) return inverse_mod(a, p_);
    return pow(a, q_ - 2);
  }

  /// 0, +1 for nonzero squares, -1 otherwise (Euler's criterion in F_q).
  int quad_char(Raw a) const {
    if (a == 0) return 0;
    return pow(a, (q_ - 1) / 2) == one() ? 1 : -1;
  }

  Raw from_int(std::int64_t z) const { return detail::reduce(z, p_); }
  Raw from_int(const BigInt& z) const {
    BigInt r = z % p_;
    if (r < 0) r += p_;
    return static_cast<Raw>(r);
  }

  Raw from_coeffs(std::span<const std::uint64_t> c) const {
    if (c.size() > k_) throw std::invalid_argument("field: too many coefficients");
    Raw out = 0;
    for (std::size_t i = 0; i < c.size(); ++i) out += (c[i] % p_) * pow_[i];
    return out;
  }

  std::vector<std::uint64_t> coeffs(Raw a) const {
    std::vector<std::uint64_t> c(k_);
    for (unsigned i = 0; i < k_; ++i) c[i] = digit(a, i);
    return c;
  }

  bool contains(Raw a) const { return a < q_; }

  // Canonical order: coefficient vectors compared lexicographically, constant
  // term first. Index t lists c_0 as its most significant base-p digit.
  std::uint64_t canonical_index(Raw a) const {
    std::uint64_t t = 0;
    for (unsigned i = 0; i < k_; ++i) t = t * p_ + digit(a, i);
    return t;
  }

  Raw from_canonical_index(std::uint64_t t) const {
    Raw out = 0;
    for (unsigned i = k_; i-- > 0;) {
      out += (t % p_) * pow_[i];
      t /= p_;
    }
    return out;
  }

  bool canonical_less(Raw a, Raw b) const { return canonical_index(a) < canonical_index(b); }

  /// "3" in prime fields, "[c0,c1,...]" otherwise.
  std::string format(Raw a) const {
    if (k_ == 1) return std::to_string(a);
    std::ostringstream os;
    os << '[';
    for (unsigned i = 0; i < k_; ++i) os << (i ? "," : "") << digit(a, i);
    os << ']';
    return os.str();
  }

  /// The nonzero squares in canonical order.
  std::vector<Raw> squares_raw() const {
    if (q_ > (std::uint64_t{1} << 28)) throw std::invalid_argument("field: too large to enumerate squares");
    std::vector<bool> hit(q_, false);
    for (Raw x = 1; x < q_; ++x) hit[mul(x, x)] = true;
    std::vector<Raw> out;
    out.reserve((q_ - 1) / 2);
    for (std::uint64_t t = 1; t < q_; ++t) {
      const Raw a = from_canonical_index(t);
      if (hit[a]) out.push_back(a);
    }
    return out;
  }

  Raw smallest_nonsquare_raw() const {
    for (std::uint64_t t = 1; t < q_; ++t) {
      const Raw a = from_canonical_index(t);
      if (quad_char(a) == -1) return a;
    }
    throw std::logic_error("field: no nonsquare");
  }

  /// First canonical-order element whose order is q-1.
  Raw generator_raw() const {
    const Factorization f = factorize(BigInt(q_ - 1));
    for (std::uint64_t t = 1; t < q_; ++t) {
      const Raw g = from_canonical_index(t);
      bool ok = true;
      for (const auto& [r, e] : f.factors) {
        if (pow(g, (q_ - 1) / static_cast<std::uint64_t>(r)) == one()) {
          ok = false;
          break;
        }
      }
      if (ok) return g;
    }
    throw std::logic_error("field: no generator");
  }

  /// Tonelli-Shanks over F_q; nullopt for nonsquares.
  std::optional<Raw> sqrt(Raw a) const {
    if (a == 0) return Raw{0};
    if (quad_char(a) != 1) return std::nullopt;
    std::uint64_t t = q_ - 1;
    unsigned s = 0;
    while (t % 2 == 0) {
      t /= 2;
      ++s;
    }
    Raw c = pow(smallest_nonsquare_raw(), t);
    Raw x = pow(a, (t + 1) / 2);
    Raw b = pow(a, t);
    while (b != one()) {
      unsigned i = 0;
      for (Raw probe = b; probe != one(); probe = mul(probe, probe)) ++i;
      Raw w = c;
      for (unsigned j = 0; j + i + 1 < s; ++j) w = mul(w, w);
      x = mul(x, w);
      c = mul(w, w);
      b = mul(b, c);
      s = i;
    }
    return x;
  }

 private:
  std::uint64_t digit(Raw a, unsigned i) const { return a / pow_[i] % p_; }

  std::vector<std::uint64_t> smallest_irreducible() const {
    // lexicographically smallest over (c_0, ..., c_{k-1}), i.e. canonical index
    // order; c_0 = 0 is divisible by x, so start at c_0 = 1
    for (std::uint64_t t = pow_[k_ - 1]; t < q_; ++t) {
      detail::Poly f(k_ + 1, 0);
      std::uint64_t rest = t;
      for (unsigned i = k_; i-- > 0;) {
        f[i] = rest % p_;
        rest /= p_;
      }
      f[k_] = 1;
      if (f[0] != 0 && detail::is_irreducible(f, p_)) return f;
    }
    throw std::logic_error("field: no irreducible polynomial found");
  }

  std::uint64_t p_;
  unsigned k_;
  std::uint64_t q_ = 0;
  std::array<std::uint64_t, kMaxExtensionDegree> pow_{};
  std::vector<std::uint64_t> modulus_;
};

inline Field field_create(std::uint64_t p, unsigned k = 1) { return std::make_shared<const FieldCtx>(p, k); }

/// Field of order q (odd prime power).
inline Field field_of_order(std::uint64_t q) {
  auto pp = as_prime_power(q);
  if (!pp || pp->p == 2) throw std::invalid_argument("field: order must be an odd prime power");
  return field_create(pp->p, pp->k);
}

class FieldElem {
 public:
  FieldElem(Field ctx, Raw raw) : ctx_(std::move(ctx)), raw_(raw) {
    if (!ctx_) throw std::invalid_argument("field element without field");
    if (!ctx_->contains(raw_)) throw std::invalid_argument("field element out of range");
  }

  const Field& ctx() const { return ctx_; }
  Raw raw() const { return raw_; }
  bool is_zero() const { return raw_ == 0; }
  std::vector<std::uint64_t> coeffs() const { return ctx_->coeffs(raw_); }
  std::string to_string() const { return ctx_->format(raw_); }

  FieldElem inv() const { return {ctx_, ctx_->inv(raw_)}; }
  FieldElem pow(std::uint64_t e) const { return {ctx_, ctx_->pow(raw_, e)}; }

  friend FieldElem operator+(const FieldElem& a, const FieldElem& b) {
    check(a, b);
    return {a.ctx_, a.ctx_->add(a.raw_, b.raw_)};
  }
  friend FieldElem operator-(const FieldElem& a, const FieldElem& b) {
    check(a, b);
    return {a.ctx_, a.ctx_->sub(a.raw_, b.raw_)};
  }
  friend FieldElem operator*(const FieldElem& a, const FieldElem& b) {
    check(a, b);
    return {a.ctx_, a.ctx_->mul(a.raw_, b.raw_)};
  }
  friend FieldElem operator/(const FieldElem& a, const FieldElem& b) {
    check(a, b);
    return {a.ctx_, a.ctx_->mul(a.raw_, a.ctx_->inv(b.raw_))};
  }
  FieldElem operator-() const { return {ctx_, ctx_->neg(raw_)}; }

  friend bool operator==(const FieldElem& a, const FieldElem& b) {
    check(a, b);
    return a.raw_ == b.raw_;
  }

 private:
  static void check(const FieldElem& a, const FieldElem& b) {
    if (!a.ctx_->same_as(*b.ctx_)) throw std::invalid_argument("field: operands from different fields");
  }

  Field ctx_;
  Raw raw_;
};

inline FieldElem zero(const Field& f) { return {f, 0}; }
inline FieldElem one(const Field& f) { return {f, 1}; }

inline int quad_char(const FieldElem& x) { return x.ctx()->quad_char(x.raw()); }

inline FieldElem embed_int(const Field& f, std::int64_t z) { return {f, f->from_int(z)}; }
inline FieldElem embed_int(const Field& f, const BigInt& z) { return {f, f->from_int(z)}; }

inline FieldElem from_coeffs(const Field& f, std::span<const std::uint64_t> c) { return {f, f->from_coeffs(c)}; }

struct SquareList {
  Field ctx;
  std::vector<FieldElem> items;
};

inline SquareList squares(const Field& f) {
  SquareList out{f, {}};
  for (Raw a : f->squares_raw()) out.items.emplace_back(f, a);
  return out;
}

inline FieldElem find_generator(const Field& f) { return {f, f->generator_raw()}; }

inline FieldElem smallest_nonsquare(const Field& f) { return {f, f->smallest_nonsquare_raw()}; }

inline std::optional<FieldElem> sqrt(const FieldElem& x) {
  auto r = x.ctx()->sqrt(x.raw());
  if (!r) return std::nullopt;
  return FieldElem(x.ctx(), *r);
}

}  // namespace ldet

#endif  // LDET_FIELD_HPP
