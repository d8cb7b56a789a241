#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ltk/characters.hpp"

namespace ltk {

/// A character of Q_l^x: a primitive character of (Z/l^n)^x (n the conductor
/// exponent) together with the value at the uniformizer l.
class MultChar {
 public:
  MultChar(const UnitCharacter& unit, Rational pi_value) : unit_(unit.primitive()), pi_(std::move(pi_value)) {}

  static MultChar unramified(std::uint64_t l, Rational pi_value) { return MultChar(UnitCharacter(l), std::move(pi_value)); }

  std::uint64_t prime() const { return unit_.prime(); }
  int conductor() const { return unit_.level(); }
  bool is_unramified() const { return conductor() == 0; }
  const UnitCharacter& unit() const { return unit_; }
  const Rational& pi_value() const { return pi_; }
  /// chi(-1) as +1 or -1.
  int sign() const {
    if (is_unramified()) return 1;
    return unit_.value_exponent(-1) == 0 ? 1 : -1;
  }

  MultChar inverse() const {
    if (pi_.is_zero()) throw DomainError("character with chi(pi) = 0 has no inverse");
    return MultChar(unit_.inverse(), ltk::inverse(pi_));
  }
  /// chi times the unramified character with value a at pi.
  MultChar twist(const Rational& a) const { return MultChar(unit_, pi_ * a); }
  bool is_trivial() const { return is_unramified() && pi_ == Rational(1); }

  friend MultChar operator*(const MultChar& a, const MultChar& b) { return MultChar(a.unit_ * b.unit_, a.pi_ * b.pi_); }
  friend bool operator==(const MultChar& a, const MultChar& b) { return a.unit_ == b.unit_ && a.pi_ == b.pi_; }

  std::string str() const { return "(" + unit_.str() + ", pi -> " + pi_.str() + ")"; }

 private:
  UnitCharacter unit_;
  Rational pi_;
};

namespace detail {

template <CoeffRing R>
QuotientRing<R> widen(const QuotientRing<R>& a, std::uint64_t M) {
  const auto T = lcm_u(a.root_order(), M);
  return T == a.root_order() ? a : cyclotomic_ring_of_order<R>(T, a.base());
}

}  // namespace detail

/// a * b after embedding both into Q(zeta_lcm).
template <CoeffRing R>
QuotientElem<R> widen_mul(const QuotientElem<R>& a, const QuotientElem<R>& b) {
  if (a.context().root_order() == b.context().root_order()) return a * b;
  const auto ring = detail::widen(a.context(), b.context().root_order());
  return embed_cyclotomic(a, ring) * embed_cyclotomic(b, ring);
}

template <CoeffRing R>
QuotientElem<R> widen_add(const QuotientElem<R>& a, const QuotientElem<R>& b) {
  if (a.context().root_order() == b.context().root_order()) return a + b;
  const auto ring = detail::widen(a.context(), b.context().root_order());
  return embed_cyclotomic(a, ring) + embed_cyclotomic(b, ring);
}

/// The ring Q(zeta_1) = Q over base.
template <CoeffRing R>
QuotientRing<R> trivial_cyclotomic(const typename R::context_type& base) {
  return cyclotomic_ring_of_order<R>(1, base);
}

/// L(mu) = (1 - mu(pi))^{-1} for unramified mu, 1 otherwise.
template <CoeffRing R>
R l_factor(const MultChar& mu, const typename R::context_type& base) {
  if (!mu.is_unramified()) return base.one();
  if (mu.pi_value() == Rational(1)) throw PoleError("L(mu) has a pole: mu unramified with mu(pi) = 1");
  return inverse(base.one() - base.from_rational(mu.pi_value()));
}

inline Rational l_factor(const MultChar& mu) { return l_factor<Rational>(mu, RationalField{}); }

/// 1 / L(mu); never singular.
template <CoeffRing R>
R l_factor_inverse(const MultChar& mu, const typename R::context_type& base) {
  if (!mu.is_unramified()) return base.one();
  return base.one() - base.from_rational(mu.pi_value());
}

/// tau(chi, psi) = sum_{u mod l^n} chi(u) psi(u / l^n) at the level n of chi
/// (imprimitive characters allowed).
template <CoeffRing R>
QuotientElem<R> gauss_sum(const UnitCharacter& chi, const PsiSystem& psi, const typename R::context_type& base) {
  const int n = chi.level();
  if (n < 1) throw ConductorError("gauss_sum needs level n >= 1");
  if (psi.p != chi.prime()) throw DomainError("psi and chi live at different primes");
  const auto ring = character_ring<R>(base, chi);
  const auto M = ring.root_order();
  std::vector<R> acc(M, base.zero());
  for (auto u : chi.group().elements()) {
    const auto e = chi.root_exponent(static_cast<long long>(u), M) + static_cast<std::uint64_t>(psi.root_exponent(static_cast<long long>(u), n, M));
    acc[e % M] += base.one();
  }
  return ring.from_coefficients(std::move(acc));
}

template <CoeffRing R>
QuotientElem<R> gauss_sum(const MultChar& chi, const PsiSystem& psi, const typename R::context_type& base) {
  if (chi.is_unramified()) throw ConductorError("gauss_sum of an unramified character; its epsilon factor is 1");
  return gauss_sum<R>(chi.unit(), psi, base);
}

/// Unnormalized epsilon factor chi(pi)^n tau(chi, psi); 1 when unramified.
template <CoeffRing R>
QuotientElem<R> epsilon_abelian(const MultChar& chi, const PsiSystem& psi, const typename R::context_type& base) {
  if (chi.is_unramified()) return trivial_cyclotomic<R>(base).one();
  const auto tau = gauss_sum<R>(chi, psi, base);
  return tau * pow(base.from_rational(chi.pi_value()), static_cast<unsigned long long>(chi.conductor()));
}

/// Integrand data for inverse_l_eval: coef * chi(a) * 1_{pi^vpi rep (1+l^depth)}(a),
/// or coef * chi(a) on all of F^x when no coset is given.
struct LocalTerm {
  Rational coef;
  MultChar chi;
  struct Coset {
    std::uint64_t rep = 1;
    int depth = 0;
    int vpi = 0;
  };
  std::optional<Coset> coset;
};

namespace detail {

/// vol(rep (1 + l^m)) inside O^x with vol(O^x) = 1.
inline Rational coset_volume(std::uint64_t l, int m) {
  if (m == 0) return Rational(1);
  return inverse(Rational(static_cast<long long>(euler_phi(ipow(l, static_cast<unsigned>(m))))));
}

/// integral over rep(1+l^m) of the unit part of chi; m = 0 means all of O^x.
template <CoeffRing R>
QuotientElem<R> unit_coset_integral(const UnitCharacter& chi, std::uint64_t rep, int m, const typename R::context_type& base) {
  const auto ring = cyclotomic_ring_of_order<R>(chi.order(), base);
  if (chi.level() > m) return ring.zero();
  const auto v = base.from_rational(coset_volume(chi.prime(), m));
  if (m == 0) return ring.embed(v);
  if (rep % chi.prime() == 0) throw DomainError("coset representative is not a unit");
  return chi.value(static_cast<long long>(rep), ring) * v;
}

/// Average of chi over O^x by brute summation over (Z/l^c)^x.
template <CoeffRing R>
QuotientElem<R> unit_average(const UnitCharacter& chi, const typename R::context_type& base) {
  const auto ring = cyclotomic_ring_of_order<R>(chi.order(), base);
  if (chi.level() == 0) return ring.one();
  auto s = ring.zero();
  for (auto u : chi.group().elements()) s += chi.value(static_cast<long long>(u), ring);
  return s * base.from_rational(inverse(Rational(static_cast<long long>(chi.group().order()))));
}

}  // namespace detail

/// 1 - int_{O^x} mu(pi a) h(pi a) da.
template <CoeffRing R>
QuotientElem<R> inverse_l_eval(const MultChar& mu, const std::vector<LocalTerm>& h, const typename R::context_type& base) {
  auto total = trivial_cyclotomic<R>(base).zero();
  for (const auto& t : h) {
    if (t.chi.prime() != mu.prime()) throw DomainError("inverse_l_eval: characters at different primes");
    const auto mc = mu * t.chi;
    const auto c = base.from_rational(t.coef * mc.pi_value());
    if (!t.coset) {
      const auto closed = detail::unit_coset_integral<R>(mc.unit(), 1, 0, base);
      // Same integral with the uniformizer l replaced by l * u0.
      const long long u0 = mu.prime() == 2 ? 3 : static_cast<long long>(primitive_root_mod(static_cast<unsigned long>(mu.prime())));
      const auto avg = detail::unit_average<R>(mc.unit(), base);
      // mu chi(l u0) = mu chi(l) chi(u0); substituting a -> a / u0 cancels it.
      const auto shift = mc.unit().value(u0, avg.context());
      if (shift * closed != shift * avg)
        throw ConsistencyError("inverse_l_eval depends on the uniformizer");
      total = widen_add(total, closed * c);
      continue;
    }
    if (t.coset->vpi != 1) continue;
    // mu(pi a) h(pi a) on a in rep(1+l^m): the unit part of mu chi evaluated at a.
    total = widen_add(total, detail::unit_coset_integral<R>(mc.unit(), t.coset->rep, t.coset->depth, base) * c);
  }
  return widen_add(trivial_cyclotomic<R>(base).one(), -total);
}

/// Local representation data: principal series, special (Steinberg twist),
/// or supercuspidal with user-supplied tables.
struct SatakeData {
  enum class Kind { principal, special, supercuspidal };
  Kind kind;
  std::vector<MultChar> mu;  // (mu1, mu2) or (mu)
  /// L(s, Ad) as a function of x = l^{-s}.
  std::function<Rational(const Rational&)> adjoint_l;
  std::optional<int> epsilon_sign;

  static SatakeData principal(MultChar mu1, MultChar mu2) { return {Kind::principal, {std::move(mu1), std::move(mu2)}, {}, {}}; }
  static SatakeData special(MultChar m) { return {Kind::special, {std::move(m)}, {}, {}}; }
  static SatakeData supercuspidal(std::function<Rational(const Rational&)> adj, std::optional<int> eps = {}) {
    return {Kind::supercuspidal, {}, std::move(adj), eps};
  }

  std::uint64_t prime() const {
    if (mu.empty()) throw MissingDataError("supercuspidal data carries no characters");
    return mu.front().prime();
  }
  MultChar central() const {
    switch (kind) {
      case Kind::principal: return mu[0] * mu[1];
      case Kind::special: return mu[0] * mu[0];
      default: throw MissingDataError("central character of supercuspidal data is not modeled");
    }
  }
  /// The characters whose unramified members contribute to L(Pi x chi).
  std::vector<MultChar> l_parameters(const MultChar& chi) const {
    std::vector<MultChar> out;
    for (const auto& m : mu) out.push_back(m * chi);
    return out;
  }
};

/// L(Pi x chi).
template <CoeffRing R>
R l_function(const SatakeData& pi, const MultChar& chi, const typename R::context_type& base) {
  R out = base.one();
  for (const auto& a : pi.l_parameters(chi)) out *= l_factor<R>(a, base);
  return out;
}

template <CoeffRing R>
R l_function_inverse(const SatakeData& pi, const MultChar& chi, const typename R::context_type& base) {
  R out = base.one();
  for (const auto& a : pi.l_parameters(chi)) out *= l_factor_inverse<R>(a, base);
  return out;
}

/// L(s, Ad) at x = l^{-s}.
template <CoeffRing R>
R adjoint_l(const SatakeData& pi, const Rational& x, const typename R::context_type& base) {
  auto factor = [&](const Rational& a, const char* name) {
    if (a * x == Rational(1)) throw PoleError(std::string("L(s, Ad) has a pole in the factor ") + name);
    return inverse(base.one() - base.from_rational(a * x));
  };
  switch (pi.kind) {
    case SatakeData::Kind::principal: {
      const auto r = pi.mu[0] * pi.mu[1].inverse();
      R out = factor(Rational(1), "1");
      if (r.is_unramified()) {
        out *= factor(r.pi_value(), "mu1/mu2");
        out *= factor(inverse(r.pi_value()), "mu2/mu1");
      }
      return out;
    }
    case SatakeData::Kind::special:
      return factor(inverse(Rational(static_cast<long long>(pi.prime()))), "l^{-1}");
    default:
      if (!pi.adjoint_l) throw MissingDataError("supercuspidal L(s, Ad) not supplied");
      return base.from_rational(pi.adjoint_l(x));
  }
}

/// Unnormalized epsilon(Pi x chi) as a product of abelian factors; for the
/// unramified special case the factor -(mu chi)(pi) replaces the Gauss sums.
template <CoeffRing R>
QuotientElem<R> epsilon_rep(const SatakeData& pi, const MultChar& chi, const PsiSystem& psi, const typename R::context_type& base) {
  switch (pi.kind) {
    case SatakeData::Kind::principal:
      return widen_mul(epsilon_abelian<R>(pi.mu[0] * chi, psi, base), epsilon_abelian<R>(pi.mu[1] * chi, psi, base));
    case SatakeData::Kind::special: {
      const auto a = pi.mu[0] * chi;
      if (a.is_unramified()) return trivial_cyclotomic<R>(base).embed(-base.from_rational(a.pi_value()));
      const auto e = epsilon_abelian<R>(a, psi, base);
      return e * e;
    }
    default:
      throw MissingDataError("supercuspidal epsilon factors are not computed");
  }
}

/// Sum of the conductor exponents of the abelian constituents of Pi x chi.
inline int conductor_rep(const SatakeData& pi, const MultChar& chi) {
  switch (pi.kind) {
    case SatakeData::Kind::principal: return (pi.mu[0] * chi).conductor() + (pi.mu[1] * chi).conductor();
    case SatakeData::Kind::special: return 2 * (pi.mu[0] * chi).conductor();
    default: throw MissingDataError("supercuspidal conductor not supplied");
  }
}

}  // namespace ltk
