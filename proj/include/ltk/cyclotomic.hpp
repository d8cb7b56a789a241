#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ltk/number_theory.hpp"
#include "ltk/ring.hpp"

namespace ltk {

template <CoeffRing R>
class QuotientElem;

namespace detail {
template <CoeffRing R>
struct QuotientSpec {
  typename R::context_type base;
  std::vector<R> modulus;                       // monic, constant term first
  std::vector<std::pair<std::size_t, R>> tail;  // nonzero g_j, j < degree
  std::vector<R> power_traces;                  // Tr(x^i), i < degree
  std::uint64_t root_order = 0;                 // m when the modulus is Phi_m
  std::string label;
};
}  // namespace detail

/// R[x]/(g) for a monic g. Used both for cyclotomic rings R[x]/Phi_m (the
/// class of x is a primitive m-th root of unity) and for Lubin-Tate torsion
/// rings R[T]/(Eisenstein factor).
template <CoeffRing R>
class QuotientRing {
 public:
  using base_context = typename R::context_type;
  using element = QuotientElem<R>;

  QuotientRing(base_context base, std::vector<R> monic, std::uint64_t root_order = 0, std::string label = {}) {
    if (monic.size() < 2) throw DomainError("quotient modulus must have degree >= 1");
    if (!(monic.back() == base.one())) throw DomainError("quotient modulus must be monic");
    auto spec = std::make_shared<detail::QuotientSpec<R>>(detail::QuotientSpec<R>{base, std::move(monic), {}, {}, root_order, std::move(label)});
    const std::size_t d = spec->modulus.size() - 1;
    for (std::size_t j = 0; j < d; ++j)
      if (!spec->modulus[j].is_zero()) spec->tail.emplace_back(j, spec->modulus[j]);
    // Newton identities: s_k + a_{d-1}s_{k-1} + ... + k a_{d-k} = 0.
    spec->power_traces.assign(d, base.zero());
    spec->power_traces[0] = base.from_int(static_cast<long long>(d));
    for (std::size_t k = 1; k < d; ++k) {
      R s = base.from_int(static_cast<long long>(k)) * spec->modulus[d - k];
      for (std::size_t i = 1; i < k; ++i) s += spec->modulus[d - i] * spec->power_traces[k - i];
      spec->power_traces[k] = -s;
    }
    spec_ = std::move(spec);
  }

  std::size_t degree() const { return spec_->modulus.size() - 1; }
  const std::vector<R>& modulus() const { return spec_->modulus; }
  const base_context& base() const { return spec_->base; }
  std::uint64_t root_order() const { return spec_->root_order; }
  const std::string& label() const { return spec_->label; }

  element zero() const { return element(*this, std::vector<R>(degree(), base().zero())); }
  element one() const { return embed(base().one()); }
  element from_int(long long n) const { return embed(base().from_int(n)); }
  element from_rational(const Rational& q) const { return embed(base().from_rational(q)); }
  element embed(const R& a) const {
    std::vector<R> c(degree(), base().zero());
    c[0] = a;
    return element(*this, std::move(c));
  }
  /// Class of x (zeta_m for cyclotomic rings, the torsion point for torsion rings).
  element generator() const {
    if (degree() == 1) return embed(-modulus()[0]);
    std::vector<R> c(degree(), base().zero());
    c[1] = base().one();
    return element(*this, std::move(c));
  }
  /// zeta_m^e for a cyclotomic ring.
  element root_power(long long e) const {
    if (root_order() == 0) throw DomainError("root_power on a non-cyclotomic quotient");
    return one().times_root(e);
  }
  element from_coefficients(std::vector<R> c) const {
    if (c.size() > degree()) {
      reduce(c);
    }
    c.resize(degree(), base().zero());
    return element(*this, std::move(c));
  }

  // Reduces an arbitrary-length coefficient vector modulo g in place.
  void reduce(std::vector<R>& v) const {
    const std::size_t d = degree();
    for (std::size_t k = v.size(); k-- > d;) {
      if (v[k].is_zero()) continue;
      const R t = v[k];
      for (const auto& [j, gj] : spec_->tail) v[k - d + j] -= t * gj;
      v[k] = base().zero();
    }
    if (v.size() > d) v.resize(d, base().zero());
  }

  const std::vector<R>& power_traces() const { return spec_->power_traces; }

  friend bool operator==(const QuotientRing& a, const QuotientRing& b) {
    return a.spec_ == b.spec_ || (a.spec_->modulus == b.spec_->modulus && a.base() == b.base());
  }

 private:
  std::shared_ptr<const detail::QuotientSpec<R>> spec_;
};

template <CoeffRing R>
class QuotientElem {
 public:
  using context_type = QuotientRing<R>;

  QuotientElem(QuotientRing<R> ring, std::vector<R> coeffs) : ring_(std::move(ring)), c_(std::move(coeffs)) {}

  const QuotientRing<R>& context() const { return ring_; }
  const std::vector<R>& coefficients() const { return c_; }
  const R& operator[](std::size_t i) const { return c_[i]; }

  bool is_zero() const {
    for (const auto& x : c_)
      if (!x.is_zero()) return false;
    return true;
  }
  // True when the element lies in the base ring (all higher coefficients vanish).
  bool in_base() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (!c_[i].is_zero()) return false;
    return true;
  }
  R base_value() const {
    if (!in_base()) throw DomainError("element " + str() + " is not in the base ring");
    return c_[0];
  }

  /// Trace of multiplication-by-this over the base ring, i.e. the sum over all
  /// roots of the modulus.
  R trace() const {
    R s = ring_.base().zero();
    const auto& t = ring_.power_traces();
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (!c_[i].is_zero()) s += c_[i] * t[i];
    return s;
  }

  /// Multiplication by x^e (e may be negative for cyclotomic rings).
  QuotientElem times_root(long long e) const {
    if (e < 0) {
      if (ring_.root_order() == 0) throw DomainError("negative power of a non-unit generator");
      e = static_cast<long long>(mod_u(e, ring_.root_order()));
    }
    if (ring_.root_order() != 0) e %= static_cast<long long>(ring_.root_order());
    std::vector<R> v(c_.size() + static_cast<std::size_t>(e), ring_.base().zero());
    for (std::size_t i = 0; i < c_.size(); ++i) v[i + static_cast<std::size_t>(e)] = c_[i];
    ring_.reduce(v);
    return QuotientElem(ring_, std::move(v));
  }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i].is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += "(" + c_[i].str() + ")";
      if (i > 0) s += "*z^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
  }

  QuotientElem& operator+=(const QuotientElem& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  QuotientElem& operator-=(const QuotientElem& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  QuotientElem& operator*=(const QuotientElem& o) {
    *this = *this * o;
    return *this;
  }
  QuotientElem& operator*=(const R& s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  friend QuotientElem operator+(QuotientElem a, const QuotientElem& b) { return a += b; }
  friend QuotientElem operator-(QuotientElem a, const QuotientElem& b) { return a -= b; }
  friend QuotientElem operator-(QuotientElem a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend QuotientElem operator*(const QuotientElem& a, const QuotientElem& b) {
    const std::size_t d = a.c_.size();
    std::vector<R> v(2 * d - 1, a.ring_.base().zero());
    for (std::size_t i = 0; i < d; ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < d; ++j)
        if (!b.c_[j].is_zero()) v[i + j] += a.c_[i] * b.c_[j];
    }
    a.ring_.reduce(v);
    return QuotientElem(a.ring_, std::move(v));
  }
  friend QuotientElem operator*(QuotientElem a, const R& s) { return a *= s; }
  friend QuotientElem operator*(const R& s, QuotientElem a) { return a *= s; }
  friend bool operator==(const QuotientElem& a, const QuotientElem& b) { return a.c_ == b.c_; }
  friend bool operator!=(const QuotientElem& a, const QuotientElem& b) { return !(a == b); }

 private:
  QuotientRing<R> ring_;
  std::vector<R> c_;
};

template <CoeffRing R>
std::ostream& operator<<(std::ostream& os, const QuotientElem<R>& a) {
  return os << a.str();
}

/// Inverse by Gaussian elimination on the multiplication matrix; pivots must
/// be invertible in the base ring.
template <CoeffRing R>
QuotientElem<R> inverse(const QuotientElem<R>& a) {
  const auto& ring = a.context();
  const std::size_t d = ring.degree();
  // Column j of M is a * x^j.
  std::vector<std::vector<R>> m(d, std::vector<R>(d + 1, ring.base().zero()));
  QuotientElem<R> col = a;
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) m[i][j] = col[i];
    col = col.times_root(1);
  }
  m[0][d] = ring.base().one();
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t piv = d;
    for (std::size_t r = c; r < d; ++r) {
      if (m[r][c].is_zero()) continue;
      try {
        (void)inverse(m[r][c]);
        piv = r;
        break;
      } catch (const Error&) {
      }
    }
    if (piv == d) throw DomainError("element " + a.str() + " is not invertible");
    std::swap(m[piv], m[c]);
    const R inv = inverse(m[c][c]);
    for (auto& x : m[c]) x *= inv;
    for (std::size_t r = 0; r < d; ++r) {
      if (r == c || m[r][c].is_zero()) continue;
      const R f = m[r][c];
      for (std::size_t k = c; k <= d; ++k) m[r][k] -= f * m[c][k];
    }
  }
  std::vector<R> out(d, ring.base().zero());
  for (std::size_t i = 0; i < d; ++i) out[i] = m[i][d];
  return QuotientElem<R>(ring, std::move(out));
}

template <CoeffRing R>
QuotientElem<R> divide_by_p_power(const QuotientElem<R>& a, unsigned long p, int k) {
  std::vector<R> c;
  for (const auto& x : a.coefficients()) c.push_back(divide_by_p_power(x, p, k));
  return QuotientElem<R>(a.context(), std::move(c));
}

/// Q(zeta_m) (or R[zeta_m]) presented as R[z]/Phi_m(z).
template <CoeffRing R>
QuotientRing<R> cyclotomic_ring_of_order(std::uint64_t m, const typename R::context_type& base) {
  if (m < 1) throw LevelError("cyclotomic order must be >= 1");
  const auto phi = cyclotomic_polynomial(m);
  std::vector<R> g;
  g.reserve(phi.size());
  for (auto c : phi) g.push_back(base.from_int(c));
  return QuotientRing<R>(base, std::move(g), m, "Phi_" + std::to_string(m));
}

/// The ring generated by a primitive p^n-th root of unity over Q.
inline QuotientRing<Rational> cyclotomic_ring(std::uint64_t p, int n) {
  if (n < 1) throw LevelError("cyclotomic level n must be >= 1");
  if (!is_prime(p)) throw DomainError("cyclotomic_ring needs a prime p");
  return cyclotomic_ring_of_order<Rational>(ipow(p, static_cast<unsigned>(n)), RationalField{});
}

template <CoeffRing R>
QuotientElem<R> primitive_root_of_unity(const QuotientRing<R>& ring, unsigned long order) {
  if (ring.root_order() != 0 && ring.root_order() % order == 0)
    return ring.root_power(static_cast<long long>(ring.root_order() / order));
  return ring.embed(primitive_root_of_unity(ring.base(), order));
}

/// Ring map R[z]/g -> S determined by z |-> image and a coefficient map R -> S.
template <CoeffRing R, class S, class CoeffMap>
S evaluate_at(const QuotientElem<R>& a, const S& image, CoeffMap&& coeff) {
  const auto& c = a.coefficients();
  S acc = coeff(c.back());
  for (std::size_t i = c.size() - 1; i-- > 0;) acc = acc * image + coeff(c[i]);
  return acc;
}

/// Q(zeta_M) -> Q(zeta_M') for M | M', zeta_M |-> zeta_M'^{M'/M}.
template <CoeffRing R>
QuotientElem<R> embed_cyclotomic(const QuotientElem<R>& a, const QuotientRing<R>& target) {
  const auto M = a.context().root_order(), T = target.root_order();
  if (M == 0 || T == 0 || T % M != 0) throw DomainError("embed_cyclotomic: root orders do not divide");
  auto out = target.zero();
  const auto& c = a.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!c[i].is_zero()) out += target.root_power(static_cast<long long>(i * (T / M))) * c[i];
  return out;
}

using Cyclotomic = QuotientElem<Rational>;

}  // namespace ltk
