#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ltk/mellin.hpp"

namespace ltk {

/// Finitely many nonzero terms a_e T^e, e in Z.
template <CoeffRing R>
class LaurentPoly {
 public:
  using context_type = typename R::context_type;

  explicit LaurentPoly(context_type ctx) : ctx_(std::move(ctx)) {}
  LaurentPoly(context_type ctx, const std::map<long long, R>& terms) : ctx_(std::move(ctx)) {
    for (const auto& [e, a] : terms) add_term(e, a);
  }
  static LaurentPoly monomial(const context_type& ctx, long long e, const R& a) {
    LaurentPoly f(ctx);
    f.add_term(e, a);
    return f;
  }

  const context_type& context() const { return ctx_; }
  const std::map<long long, R>& terms() const { return t_; }
  R coeff(long long e) const {
    const auto it = t_.find(e);
    return it == t_.end() ? ctx_.zero() : it->second;
  }
  bool is_zero() const { return t_.empty(); }

  void add_term(long long e, const R& a) {
    auto it = t_.find(e);
    if (it == t_.end()) {
      if (!a.is_zero()) t_.emplace(e, a);
      return;
    }
    it->second += a;
    if (it->second.is_zero()) t_.erase(it);
  }

  LaurentPoly without(long long e) const {
    auto out = *this;
    out.t_.erase(e);
    return out;
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (const auto& [e, a] : o.t_) add_term(e, a);
    return *this;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a += b * (-b.ctx_.one()); }
  friend LaurentPoly operator*(const LaurentPoly& a, const R& s) {
    LaurentPoly out(a.ctx_);
    for (const auto& [e, x] : a.t_) out.add_term(e, x * s);
    return out;
  }
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.t_ == b.t_; }

  /// d/dT.
  LaurentPoly derivative() const {
    LaurentPoly out(ctx_);
    for (const auto& [e, a] : t_) out.add_term(e - 1, a * ctx_.from_int(e));
    return out;
  }

  /// f(T^q).
  LaurentPoly pullback(long long q) const {
    LaurentPoly out(ctx_);
    for (const auto& [e, a] : t_) out.add_term(e * q, a);
    return out;
  }

  std::string str() const {
    if (t_.empty()) return "0";
    std::string s;
    for (const auto& [e, a] : t_) {
      if (!s.empty()) s += " + ";
      s += "(" + a.str() + ")";
      if (e != 0) s += "*T^" + std::to_string(e);
    }
    return s;
  }

 private:
  context_type ctx_;
  std::map<long long, R> t_;
};

/// omega = c dT/T + dg. The constant term of g is dropped, so (c, g) is unique.
template <CoeffRing R>
class TorusDifferential {
 public:
  TorusDifferential(R residue, LaurentPoly<R> exact) : c_(std::move(residue)), g_(std::move(exact).without(0)) {}

  static TorusDifferential zero(const typename R::context_type& ctx) { return {ctx.zero(), LaurentPoly<R>(ctx)}; }
  static TorusDifferential dlog(const typename R::context_type& ctx, const R& c) { return {c, LaurentPoly<R>(ctx)}; }

  /// omega = h dT, with the T^{-1} coefficient of h as residue.
  static TorusDifferential from_form(const LaurentPoly<R>& h) { return from_form(h.coeff(-1), h.without(-1)); }

  /// omega = c dT/T + h dT with c declared; h must have no T^{-1} term.
  static TorusDifferential from_form(const R& c, const LaurentPoly<R>& h) {
    if (!h.coeff(-1).is_zero())
      throw MalformedInputError("T^-1 dT term " + h.coeff(-1).str() + " beyond the declared residue " + c.str());
    const auto& ctx = h.context();
    LaurentPoly<R> g(ctx);
    for (const auto& [e, a] : h.terms()) {
      g.add_term(e + 1, a * inverse(ctx.from_int(e + 1)));
    }
    return {c, g};
  }

  const R& residue() const { return c_; }
  const LaurentPoly<R>& exact() const { return g_; }

  /// The coefficient h of dT, residue included.
  LaurentPoly<R> form() const {
    auto h = g_.derivative();
    h.add_term(-1, c_);
    return h;
  }

  TorusDifferential& operator+=(const TorusDifferential& o) {
    c_ += o.c_;
    g_ += o.g_;
    return *this;
  }
  friend TorusDifferential operator+(TorusDifferential a, const TorusDifferential& b) { return a += b; }
  friend TorusDifferential operator*(const TorusDifferential& a, const R& s) { return {a.c_ * s, a.g_ * s}; }
  friend bool operator==(const TorusDifferential& a, const TorusDifferential& b) { return a.c_ == b.c_ && a.g_ == b.g_; }

  std::string str() const { return "(" + c_.str() + ") dT/T + d[" + g_.str() + "]"; }

 private:
  R c_;
  LaurentPoly<R> g_;
};

/// g + log_coef * LOG, where LOG is a formal symbol with d LOG = dT/T and
/// phi* LOG = q LOG.
template <CoeffRing R>
struct ColemanFunction {
  LaurentPoly<R> g;
  R log_coef;

  TorusDifferential<R> d() const { return {log_coef, g}; }
  bool has_log() const { return !log_coef.is_zero(); }
  friend bool operator==(const ColemanFunction& a, const ColemanFunction& b) { return a.g == b.g && a.log_coef == b.log_coef; }
  friend ColemanFunction operator+(const ColemanFunction& a, const ColemanFunction& b) { return {a.g + b.g, a.log_coef + b.log_coef}; }
  std::string str() const { return g.str() + " + (" + log_coef.str() + ")*LOG"; }
};

/// Frobenius T -> T^q and a polynomial P (low degree first) with no root of
/// unity among its roots.
class FrobeniusSpec {
 public:
  FrobeniusSpec(long long q, std::vector<Rational> P) : q_(q), P_(std::move(P)) {
    while (!P_.empty() && P_.back().is_zero()) P_.pop_back();
    if (q_ < 2) throw ConstructionError("Frobenius needs q >= 2");
    if (P_.size() < 2) throw ConstructionError("P must have degree >= 1");
    if (const auto m = root_of_unity_order(P_))
      throw ConstructionError("P has a root of unity of order " + std::to_string(*m) + " among its roots");
  }
  /// P(X) = X - q.
  static FrobeniusSpec linear(long long q) { return FrobeniusSpec(q, {Rational(-q), Rational(1)}); }

  long long q() const { return q_; }
  const std::vector<Rational>& P() const { return P_; }
  Rational P_at_q() const {
    Rational s(0);
    for (auto it = P_.rbegin(); it != P_.rend(); ++it) s = s * Rational(q_) + *it;
    return s;
  }

  /// The least m such that Phi_m divides P, if any.
  static std::optional<std::uint64_t> root_of_unity_order(const std::vector<Rational>& P) {
    const auto deg = static_cast<std::uint64_t>(P.size() - 1);
    // phi(m) <= deg forces m <= 2 deg^2 + 2.
    for (std::uint64_t m = 1; m <= 2 * deg * deg + 2; ++m) {
      if (euler_phi(m) > deg) continue;
      const auto c = cyclotomic_polynomial(m);
      auto r = P;
      const auto dc = c.size() - 1;
      for (std::size_t i = r.size(); i-- > dc;) {
        const auto f = r[i];
        if (f.is_zero()) continue;
        for (std::size_t j = 0; j <= dc; ++j) r[i - dc + j] -= f * Rational(c[j]);
      }
      bool zero = true;
      for (const auto& x : r) zero = zero && x.is_zero();
      if (zero) return m;
    }
    return std::nullopt;
  }

 private:
  long long q_;
  std::vector<Rational> P_;
};

template <CoeffRing R>
ColemanFunction<R> frobenius_pullback(const ColemanFunction<R>& f, long long q) {
  return {f.g.pullback(q), f.log_coef * f.log_coef.context().from_int(q)};
}

/// c dT/T + dg -> q c dT/T + d(g(T^q)).
template <CoeffRing R>
TorusDifferential<R> frobenius_pullback(const TorusDifferential<R>& w, long long q) {
  return {w.residue() * w.residue().context().from_int(q), w.exact().pullback(q)};
}

namespace detail {

template <class X, class R>
X apply_frobenius_polynomial(const X& x, const FrobeniusSpec& spec, const X& zero, const typename R::context_type& ctx) {
  X acc = zero, cur = x;
  for (std::size_t i = 0; i < spec.P().size(); ++i) {
    if (!spec.P()[i].is_zero()) acc = acc + cur * ctx.from_rational(spec.P()[i]);
    if (i + 1 < spec.P().size()) cur = frobenius_pullback(cur, spec.q());
  }
  return acc;
}

}  // namespace detail

template <CoeffRing R>
TorusDifferential<R> apply_p(const TorusDifferential<R>& w, const FrobeniusSpec& spec) {
  const auto& ctx = w.exact().context();
  return detail::apply_frobenius_polynomial<TorusDifferential<R>, R>(w, spec, TorusDifferential<R>::zero(ctx), ctx);
}

template <CoeffRing R>
ColemanFunction<R> apply_p(const ColemanFunction<R>& f, const FrobeniusSpec& spec) {
  const auto& ctx = f.g.context();
  struct Wrap {
    ColemanFunction<R> f;
    Wrap operator+(const Wrap& o) const { return {f + o.f}; }
    Wrap operator*(const R& s) const { return {{f.g * s, f.log_coef * s}}; }
  };
  Wrap acc{{LaurentPoly<R>(ctx), ctx.zero()}}, cur{f};
  for (std::size_t i = 0; i < spec.P().size(); ++i) {
    if (!spec.P()[i].is_zero()) acc = acc + cur * ctx.from_rational(spec.P()[i]);
    if (i + 1 < spec.P().size()) cur = Wrap{frobenius_pullback(cur.f, spec.q())};
  }
  return acc.f;
}

template <CoeffRing R>
struct ProperReport {
  bool proper;
  std::optional<LaurentPoly<R>> witness;  // primitive of P(phi*) omega when proper
};

template <CoeffRing R>
ProperReport<R> is_frobenius_proper(const TorusDifferential<R>& w, const FrobeniusSpec& spec) {
  const auto pw = apply_p(w, spec);
  if (!pw.residue().is_zero()) return {false, std::nullopt};
  return {true, pw.exact()};
}

/// c LOG + g for omega = c dT/T + dg, constant fixed to 0.
template <CoeffRing R>
ColemanFunction<R> coleman_primitive(const TorusDifferential<R>& w, const FrobeniusSpec& spec) {
  if (!is_frobenius_proper(w, spec).proper) throw DomainError("form is not Frobenius proper for this P");
  ColemanFunction<R> F{w.exact(), w.residue()};
  if (!(F.d() == w)) throw ConsistencyError("coleman_primitive: dF != omega");
  if (apply_p(F, spec).has_log()) throw ConsistencyError("coleman_primitive: P(phi*)F has a LOG term");
  return F;
}

/// omega = c dT/T + h dT with declared residue c.
template <CoeffRing R>
ColemanFunction<R> coleman_primitive(const R& declared_residue, const LaurentPoly<R>& h, const FrobeniusSpec& spec) {
  return coleman_primitive(TorusDifferential<R>::from_form(declared_residue, h), spec);
}

/// A disc polynomial in S read in the coordinate T = 1 + S.
template <CoeffRing R>
LaurentPoly<R> disc_to_laurent(const DiscFunction<R>& phi) {
  const auto m = to_q_basis(phi);
  LaurentPoly<R> out(phi.context());
  for (std::size_t u = 0; u < m.size(); ++u) out.add_term(static_cast<long long>(u), m[u]);
  return out;
}

/// phi dT/T: the form whose primitive g satisfies Theta g = phi on the multiplicative disc.
template <CoeffRing R>
TorusDifferential<R> disc_form(const DiscFunction<R>& phi) {
  const auto h = disc_to_laurent(phi);
  LaurentPoly<R> shifted(phi.context());
  for (const auto& [e, a] : h.terms())
    if (e != 0) shifted.add_term(e - 1, a);
  return TorusDifferential<R>::from_form(h.coeff(0), shifted);
}

}  // namespace ltk
