#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ltk/cyclotomic.hpp"
#include "ltk/series.hpp"

namespace ltk {

namespace poly {

// Dense polynomials, constant term first, no truncation.

template <CoeffRing R>
std::vector<R> mul(const std::vector<R>& a, const std::vector<R>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<R> r(a.size() + b.size() - 1, a[0].context().zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!b[j].is_zero()) r[i + j] += a[i] * b[j];
  }
  return r;
}

template <CoeffRing R>
std::vector<R> compose(const std::vector<R>& g, const std::vector<R>& f) {
  std::vector<R> acc{g.back()};
  for (std::size_t k = g.size() - 1; k-- > 0;) {
    acc = mul(acc, f);
    acc[0] += g[k];
  }
  return acc;
}

// a / b for monic b dividing a exactly.
template <CoeffRing R>
std::vector<R> divide_exact(std::vector<R> a, const std::vector<R>& b) {
  const std::size_t db = b.size() - 1;
  if (a.size() < b.size()) throw DomainError("polynomial division: dividend has smaller degree");
  std::vector<R> q(a.size() - db, a[0].context().zero());
  for (std::size_t k = a.size(); k-- > db;) {
    const R c = a[k];
    q[k - db] = c;
    if (c.is_zero()) continue;
    for (std::size_t j = 0; j <= db; ++j) a[k - db + j] -= c * b[j];
  }
  for (std::size_t j = 0; j < db; ++j)
    if (!a[j].is_zero()) throw DomainError("polynomial division is not exact");
  return q;
}

template <CoeffRing R>
void trim(std::vector<R>& a) {
  while (a.size() > 1 && a.back().is_zero()) a.pop_back();
}

}  // namespace poly

/// One-dimensional formal group law F(X,Y) truncated at total degree D,
/// together with the Lubin-Tate data (p, pi, q, f) it was built from.
template <CoeffRing R>
class FormalGroupLaw {
 public:
  using context_type = typename R::context_type;

  FormalGroupLaw(context_type ctx, unsigned long p, R pi, unsigned long q_res, std::vector<R> frobenius,
                 BivariateSeries<R> law, bool multiplicative)
      : ctx_(std::move(ctx)), p_(p), pi_(std::move(pi)), q_(q_res), frob_(std::move(frobenius)),
        law_(std::move(law)), mult_(multiplicative) {}

  const context_type& context() const { return ctx_; }
  unsigned long p() const { return p_; }
  const R& pi() const { return pi_; }
  unsigned long q_res() const { return q_; }
  int trunc() const { return law_.total_degree(); }
  const BivariateSeries<R>& law() const { return law_; }
  /// The Frobenius polynomial f, constant term first.
  const std::vector<R>& frobenius() const { return frob_; }
  /// True for the multiplicative law X + Y + XY.
  bool is_multiplicative() const { return mult_; }

  /// Largest total degree carrying a nonzero coefficient.
  int law_degree() const {
    int d = 0;
    for (int j = 0; j <= trunc(); ++j)
      for (int i = 0; i + j <= trunc(); ++i)
        if (!law_.at(i, j).is_zero()) d = std::max(d, i + j);
    return d;
  }
  bool is_polynomial() const { return law_degree() < trunc(); }

  /// dF/dX (0, S); lambda'(S) is its inverse.
  TruncatedSeries<R> invariant_derivative() const { return law_.dx_at_x_zero(); }

  template <class F>
  auto map(F&& f, const typename std::invoke_result_t<F, const R&>::context_type& target) const {
    using S = std::invoke_result_t<F, const R&>;
    BivariateSeries<S> law(target, trunc());
    for (int j = 0; j <= trunc(); ++j)
      for (int i = 0; i + j <= trunc(); ++i) law.at(i, j) = f(law_.at(i, j));
    std::vector<S> fr;
    for (const auto& c : frob_) fr.push_back(f(c));
    return FormalGroupLaw<S>(target, p_, f(pi_), q_, std::move(fr), std::move(law), mult_);
  }

  /// phi(F(S, z)) for a point z of a quotient ring. Needs a polynomial law so
  /// that the substitution is exact.
  TruncatedSeries<QuotientElem<R>> translate(const TruncatedSeries<QuotientElem<R>>& phi,
                                             const QuotientElem<R>& z) const {
    if (!is_polynomial()) throw DomainError("torsion translation needs a polynomial group law");
    const auto& ring = z.context();
    const int d = phi.trunc();
    TruncatedSeries<QuotientElem<R>> fz(ring, d);
    std::vector<QuotientElem<R>> zp{ring.one()};
    for (int j = 1; j <= law_degree(); ++j) zp.push_back(zp.back() * z);
    for (int i = 0; i <= std::min(d, law_degree()); ++i) {
      auto c = ring.zero();
      for (int j = 0; i + j <= law_degree(); ++j)
        if (!law_.at(i, j).is_zero()) c += zp[static_cast<std::size_t>(j)] * law_.at(i, j);
      fz.set(i, c);
    }
    return polynomial_substitute(phi, fz);
  }

 private:
  context_type ctx_;
  unsigned long p_;
  R pi_;
  unsigned long q_;
  std::vector<R> frob_;
  BivariateSeries<R> law_;
  bool mult_;
};

namespace detail {

inline std::vector<Rational> multiplicative_frobenius(unsigned long p) {
  std::vector<Rational> f(p + 1, Rational(0));
  mpz_class b = 1;
  for (unsigned long k = 1; k <= p; ++k) {
    b = b * (p - k + 1) / k;
    f[k] = Rational(b);
  }
  return f;
}

inline void check_lubin_tate(unsigned long p, const Rational& pi, unsigned long q_res, const std::vector<Rational>& f) {
  if (!is_prime(p)) throw ConstructionError(std::to_string(p) + " is not prime");
  if (q_res != p) throw ConstructionError("only height one over Q_p is supported (q_res must equal p)");
  if (pi.valuation(p) != 1) throw ConstructionError("pi = " + pi.str() + " is not a uniformizer of Q_" + std::to_string(p));
  if (f.size() < 2 || !f[0].is_zero() || !(f[1] == pi))
    throw ConstructionError("Frobenius polynomial is not pi*T mod degree 2");
  if (f.size() <= q_res) throw ConstructionError("Frobenius polynomial has degree < q");
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Rational c = i == q_res ? f[i] - Rational(1) : f[i];
    if (!c.is_zero() && c.valuation(p) < 1)
      throw ConstructionError("Frobenius polynomial is not T^q mod pi (degree " + std::to_string(i) + ")");
  }
}

}  // namespace detail

/// Lubin-Tate formal group attached to f over Q (coefficients in Z_(p)):
/// the unique F with F = X + Y mod degree 2 and f(F(X,Y)) = F(f(X), f(Y)),
/// solved degree by degree.
inline FormalGroupLaw<Rational> lt_construct(unsigned long p, const Rational& pi, unsigned long q_res,
                                             std::vector<Rational> f, int D) {
  detail::check_lubin_tate(p, pi, q_res, f);
  poly::trim(f);
  const RationalField QQ;
  if (D < 1) throw ConstructionError("truncation degree must be >= 1");
  const bool mult = f == detail::multiplicative_frobenius(p);
  BivariateSeries<Rational> F(QQ, D);
  F.at(1, 0) = F.at(0, 1) = Rational(1);
  if (mult) {
    if (D >= 2) F.at(1, 1) = Rational(1);
    return FormalGroupLaw<Rational>(QQ, p, pi, q_res, std::move(f), std::move(F), true);
  }
  Rational pin = pi;
  for (int n = 2; n <= D; ++n) {
    pin *= pi;
    const auto Fn = F.truncated(n, n);
    TruncatedSeries<Rational> fs(QQ, f, static_cast<int>(f.size()) - 1);
    const auto fn = fs.truncated(std::min(n, fs.trunc()));
    TruncatedSeries<Rational> fpad(QQ, fn.coefficients(), n);
    const auto err = compose_bivariate(fpad, Fn) - substitute_bivariate(Fn, fpad, fpad);
    const Rational denom = inverse(pi - pin);
    for (int i = 0; i <= n; ++i) {
      const auto& e = err.at(i, n - i);
      if (!e.is_zero()) F.at(i, n - i) = -(e * denom);
    }
  }
  return FormalGroupLaw<Rational>(QQ, p, pi, q_res, std::move(f), std::move(F), false);
}

inline FormalGroupLaw<Rational> multiplicative_group(unsigned long p, int D) {
  return lt_construct(p, Rational(static_cast<long long>(p)), p, detail::multiplicative_frobenius(p), D);
}

inline FormalGroupLaw<PadicInt> reduce_group(const FormalGroupLaw<Rational>& F, const PadicRing& ring) {
  return F.map([&](const Rational& q) { return reduce(q, ring); }, ring);
}

/// [a](T) for a p-integral rational a: the unique series a T + ... commuting
/// with f.
inline TruncatedSeries<Rational> lt_endo(const FormalGroupLaw<Rational>& F, const Rational& a) {
  if (!a.is_zero() && a.valuation(F.p()) < 0) throw DomainError("[a] needs a in Z_p, got " + a.str());
  const RationalField QQ;
  const int D = F.trunc();
  auto g = TruncatedSeries<Rational>::variable(QQ, D) * a;
  const auto& f = F.frobenius();
  Rational pin = F.pi();
  for (int n = 2; n <= D; ++n) {
    pin *= F.pi();
    TruncatedSeries<Rational> fs(QQ, std::vector<Rational>(f.begin(), f.begin() + std::min<std::size_t>(f.size(), n + 1)), n);
    const auto gn = g.truncated(n);
    const Rational e = series_compose(fs, gn)[static_cast<std::size_t>(n)] - series_compose(gn, fs)[static_cast<std::size_t>(n)];
    if (!e.is_zero()) g.set(n, -(e * inverse(F.pi() - pin)));
  }
  return g;
}

/// Normalized logarithm: lambda' = 1 / (dF/dX)(0, T), lambda(0) = 0.
template <CoeffRing R>
TruncatedSeries<R> lt_log(const FormalGroupLaw<R>& F) {
  return F.invariant_derivative().inverse_series().integral();
}

template <CoeffRing R>
TruncatedSeries<R> lt_exp(const FormalGroupLaw<R>& F) {
  return series_revert(lt_log(F));
}

/// Theta phi = phi' / lambda' = phi' * (dF/dX)(0, S), known to degree D-1.
template <CoeffRing R>
TruncatedSeries<R> theta(const FormalGroupLaw<R>& F, const TruncatedSeries<R>& phi) {
  return phi.derivative() * F.invariant_derivative();
}

/// Theta on series with coefficients in a quotient ring over the base.
template <CoeffRing R>
TruncatedSeries<QuotientElem<R>> theta(const FormalGroupLaw<R>& F, const TruncatedSeries<QuotientElem<R>>& phi) {
  const auto& ring = phi.context();
  const auto w = F.invariant_derivative().map([&](const R& c) { return ring.embed(c); }, ring);
  return phi.derivative() * w;
}

/// The derivation D with D(q) = q for the coordinate q = exp(lambda(S)); as an
/// operator it is theta.
template <CoeffRing R>
class StDerivation {
 public:
  explicit StDerivation(FormalGroupLaw<R> F) : F_(std::move(F)) {}
  TruncatedSeries<R> operator()(const TruncatedSeries<R>& phi) const { return theta(F_, phi); }
  /// q(S) = exp(lambda(S)); 1 + S for the multiplicative law.
  TruncatedSeries<R> coordinate() const {
    const auto& ctx = F_.context();
    const int D = F_.trunc();
    TruncatedSeries<R> ex(ctx, D);
    R fact = ctx.one();
    ex.set(0, ctx.one());
    for (int k = 1; k <= D; ++k) {
      fact *= ctx.from_int(k);
      ex.set(k, inverse(fact));
    }
    return series_compose(ex, lt_log(F_));
  }
  const FormalGroupLaw<R>& group() const { return F_; }

 private:
  FormalGroupLaw<R> F_;
};

template <CoeffRing R>
StDerivation<R> st_derivation(const FormalGroupLaw<R>& F) {
  return StDerivation<R>(F);
}

/// R[T] / (f^(m) / f^(m-1)) with the distinguished point t_m = class of T.
template <CoeffRing R>
struct TorsionRing {
  FormalGroupLaw<R> group;
  int level;
  QuotientRing<R> ring;

  QuotientElem<R> point() const { return ring.generator(); }
  /// [p^j](t_m).
  QuotientElem<R> frobenius_iterate(int j) const {
    auto x = point();
    for (int i = 0; i < j; ++i) x = evaluate_polynomial(group.frobenius(), x);
    return x;
  }
  /// The torsion point nu(c / p^m); (1 + t)^c - 1 on the multiplicative law.
  QuotientElem<R> point_for(long long c) const {
    const auto pm = static_cast<long long>(ipow(group.p(), static_cast<unsigned>(level)));
    c = static_cast<long long>(mod_u(c, static_cast<std::uint64_t>(pm)));
    if (group.is_multiplicative()) return pow(ring.one() + point(), static_cast<unsigned long long>(c)) - ring.one();
    if (c == 0) return ring.zero();
    if (c == 1) return point();
    throw DomainError("torsion points other than t_m need the multiplicative law");
  }
  /// All points of level <= m (multiplicative law).
  std::vector<QuotientElem<R>> points() const {
    std::vector<QuotientElem<R>> out;
    const auto pm = static_cast<long long>(ipow(group.p(), static_cast<unsigned>(level)));
    for (long long c = 0; c < pm; ++c) out.push_back(point_for(c));
    return out;
  }

  static QuotientElem<R> evaluate_polynomial(const std::vector<R>& f, const QuotientElem<R>& x) {
    auto acc = x.context().embed(f.back());
    for (std::size_t i = f.size() - 1; i-- > 0;) acc = acc * x + x.context().embed(f[i]);
    return acc;
  }
};

template <CoeffRing R>
TorsionRing<R> torsion_ring(const FormalGroupLaw<R>& F, int m) {
  if (m < 1) throw LevelError("torsion level must be >= 1");
  const auto& f = F.frobenius();
  if (f.size() != F.q_res() + 1 || !(f.back() == F.context().one()))
    throw DomainError("torsion rings need a monic Frobenius polynomial of degree q");
  std::vector<R> prev{F.context().zero(), F.context().one()};
  for (int i = 1; i < m; ++i) prev = poly::compose(f, prev);
  const auto cur = poly::compose(f, prev);
  auto g = poly::divide_exact(cur, prev);
  return TorsionRing<R>{F, m, QuotientRing<R>(F.context(), std::move(g), 0, "LT[" + std::to_string(F.p()) + "^" + std::to_string(m) + "]")};
}

/// R-coefficients seen in a quotient ring.
template <CoeffRing R>
TruncatedSeries<QuotientElem<R>> extend_scalars(const TruncatedSeries<R>& phi, const QuotientRing<R>& ring) {
  return phi.map([&](const R& c) { return ring.embed(c); }, ring);
}

}  // namespace ltk
