#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ltk/local_factors.hpp"

namespace ltk {

/// value * 1 on pi^vpi rep (1 + l^depth); depth 0 means all of pi^vpi O^x.
struct CosetMass {
  std::uint64_t rep = 1;
  int depth = 0;
  int vpi = 0;
  Rational value;
};

/// mu(a) 1_{O - 0}(a) (sharp) or (1 - log_l|a|) mu(a) 1_{O - 0}(a) (log).
struct KirillovTail {
  enum class Kind { sharp, log };
  Kind kind;
  MultChar mu;
};

/// A function on Q_l^x: finitely many coset masses plus at most one tail.
class KirillovVector {
 public:
  explicit KirillovVector(std::uint64_t l, std::vector<CosetMass> cosets = {}, std::optional<KirillovTail> tail = {})
      : l_(l), cosets_(std::move(cosets)), tail_(std::move(tail)) {
    for (auto& c : cosets_) {
      if (c.depth < 0) throw DomainError("coset depth must be >= 0");
      if (c.depth == 0) c.rep = 1;
      else if (c.rep % l_ == 0) throw DomainError("coset representative " + std::to_string(c.rep) + " is not a unit");
      else c.rep %= ipow(l_, static_cast<unsigned>(c.depth));
    }
    for (std::size_t i = 0; i < cosets_.size(); ++i)
      for (std::size_t j = i + 1; j < cosets_.size(); ++j) {
        const auto& a = cosets_[i];
        const auto& b = cosets_[j];
        const auto m = ipow(l_, static_cast<unsigned>(std::min(a.depth, b.depth)));
        if (a.vpi == b.vpi && a.rep % m == b.rep % m) throw DomainError("Kirillov vector cosets overlap");
      }
    if (tail_ && tail_->mu.prime() != l_) throw DomainError("tail character lives at another prime");
  }

  static KirillovVector indicator(std::uint64_t l, std::uint64_t rep, int depth, int vpi = 0, Rational value = Rational(1)) {
    return KirillovVector(l, {CosetMass{rep, depth, vpi, std::move(value)}});
  }
  static KirillovVector sharp(const MultChar& mu) { return KirillovVector(mu.prime(), {}, KirillovTail{KirillovTail::Kind::sharp, mu}); }
  static KirillovVector log_weighted(const MultChar& mu) { return KirillovVector(mu.prime(), {}, KirillovTail{KirillovTail::Kind::log, mu}); }

  std::uint64_t prime() const { return l_; }
  const std::vector<CosetMass>& cosets() const { return cosets_; }
  const std::optional<KirillovTail>& tail() const { return tail_; }
  bool is_zero() const {
    if (tail_) return false;
    for (const auto& c : cosets_)
      if (!c.value.is_zero()) return false;
    return true;
  }

  /// Coset masses only; the tail cannot be scaled by a non-unit scalar here.
  KirillovVector scaled(const Rational& s) const {
    if (tail_ && s != Rational(1)) throw DomainError("scaling a tail term is not modeled");
    auto c = cosets_;
    for (auto& x : c) x.value *= s;
    return KirillovVector(l_, std::move(c), tail_);
  }

  /// Supported in (1 + l^n)^x: no tail, every coset at vpi 0 with depth >= n
  /// and rep = 1 mod l^n.
  bool supported_in_principal_units(int n) const {
    if (tail_) return false;
    const auto ln = ipow(l_, static_cast<unsigned>(n));
    for (const auto& c : cosets_) {
      if (c.value.is_zero()) continue;
      if (c.vpi != 0 || c.depth < n || c.rep % ln != 1 % ln) return false;
    }
    return true;
  }

 private:
  std::uint64_t l_;
  std::vector<CosetMass> cosets_;
  std::optional<KirillovTail> tail_;
};

namespace detail {

inline Rational rational_pow(const Rational& a, int e) {
  if (e >= 0) return pow(a, static_cast<unsigned long long>(e));
  return inverse(pow(a, static_cast<unsigned long long>(-e)));
}

/// int over the coset masses of f(a) chi(a) d^x a.
template <CoeffRing R>
QuotientElem<R> coset_integral(const KirillovVector& f, const MultChar& chi, const typename R::context_type& base) {
  auto s = cyclotomic_ring_of_order<R>(chi.unit().order(), base).zero();
  for (const auto& c : f.cosets()) {
    if (c.value.is_zero()) continue;
    const auto w = base.from_rational(c.value * rational_pow(chi.pi_value(), c.vpi));
    s += unit_coset_integral<R>(chi.unit(), c.rep, c.depth, base) * w;
  }
  return s;
}

inline void require_prime(const KirillovVector& f, const MultChar& chi, std::uint64_t l) {
  if (f.prime() != l || chi.prime() != l) throw DomainError("zeta: data at different primes");
}

}  // namespace detail

/// Z(f, chi) = L(Pi x chi)^{-1} int f(a) chi(a) d^x a with vol(O^x) = 1. The
/// tail's geometric series (1 - x)^{-e} is cancelled against matching factors
/// of L(Pi x chi)^{-1} before it is evaluated.
template <CoeffRing R>
QuotientElem<R> zeta(const KirillovVector& f, const MultChar& chi, const SatakeData& pi, const typename R::context_type& base) {
  std::vector<Rational> xs;  // uniformizer values of the unramified L-parameters
  if (pi.kind != SatakeData::Kind::supercuspidal) {
    detail::require_prime(f, chi, pi.prime());
    for (const auto& a : pi.l_parameters(chi))
      if (a.is_unramified()) xs.push_back(a.pi_value());
  } else if (f.prime() != chi.prime()) {
    throw DomainError("zeta: data at different primes");
  }
  R linv = base.one();
  for (const auto& x : xs) linv *= base.one() - base.from_rational(x);
  auto out = detail::coset_integral<R>(f, chi, base) * linv;
  if (const auto& t = f.tail()) {
    const auto a = t->mu * chi;
    if (a.is_unramified()) {
      const Rational x = a.pi_value();
      int e = t->kind == KirillovTail::Kind::sharp ? 1 : 2;
      R rest = base.one();
      for (const auto& xi : xs) {
        if (e > 0 && xi == x) --e;
        else rest *= base.one() - base.from_rational(xi);
      }
      if (e > 0) {
        if (x == Rational(1)) throw DivergenceError("zeta: tail series sum_v x^v with x = 1 is not cancelled by L^{-1}");
        rest *= pow(inverse(base.one() - base.from_rational(x)), static_cast<unsigned long long>(e));
      }
      out = widen_add(out, trivial_cyclotomic<R>(base).embed(rest));
    }
  }
  return out;
}

/// zeta_F(2)^{-1} L(1, eta) L(1, Ad) with eta trivial.
template <CoeffRing R>
R split_normalizer_inverse(const SatakeData& pi, std::uint64_t l, const typename R::context_type& base) {
  const Rational il(1, static_cast<long long>(l));
  const Rational c = (Rational(1) - il * il) / (Rational(1) - il);
  return base.from_rational(c) * adjoint_l<R>(pi, il, base);
}

/// (zeta_F(2) / L(1,eta) L(1,Ad))^{-1} Z(f+, chi_b) Z(f-, chi_b^{-1}).
template <CoeffRing R>
QuotientElem<R> local_period_split(const KirillovVector& fp, const KirillovVector& fm, const MultChar& chi_b, const MultChar& chi_c,
                                   const SatakeData& pi, const typename R::context_type& base) {
  if (pi.kind != SatakeData::Kind::supercuspidal && !(pi.central() * chi_b * chi_c).is_trivial())
    throw DomainError("central character is not compatible with (chi_b, chi_c)");
  const auto zp = zeta<R>(fp, chi_b, pi, base);
  const auto zm = zeta<R>(fm, chi_b.inverse(), pi, base);
  return widen_mul(zp, zm) * split_normalizer_inverse<R>(pi, fp.prime(), base);
}

/// A character of the compact torus F^x \ E^x, modeled on a cyclic quotient of
/// order N: t |-> zeta_N^k.
struct TorusCharacter {
  std::uint64_t order;
  std::uint64_t k;
  friend TorusCharacter operator*(const TorusCharacter& a, const TorusCharacter& b) {
    if (a.order != b.order) throw DomainError("torus characters on different quotients");
    return {a.order, (a.k + b.k) % a.order};
  }
  bool is_trivial() const { return k % order == 0; }
};

struct ToricCoefficient {
  enum class Torus { inert, ramified };
  Torus type;
  std::vector<std::pair<Rational, TorusCharacter>> terms;
};

/// sum_i a_i int chi_i chi dt; total volume 1 (inert) or 2 (ramified).
inline Rational local_period_compact(const ToricCoefficient& phi, const TorusCharacter& chi) {
  const Rational vol(phi.type == ToricCoefficient::Torus::inert ? 1 : 2);
  Rational s(0);
  for (const auto& [a, c] : phi.terms)
    if ((c * chi).is_trivial()) s += a * vol;
  return s;
}

/// A vector f with the separately supplied Pi(J) f.
struct StablePair {
  KirillovVector f;
  KirillovVector jf;
};

/// int_{O^x} f(a) da for f supported in the units.
inline Rational unit_integral(const KirillovVector& f) {
  Rational s(0);
  for (const auto& c : f.cosets())
    if (c.vpi == 0) s += c.value * detail::coset_volume(f.prime(), c.depth);
  if (f.tail()) throw DomainError("unit_integral: tails are not supported in O^x");
  return s;
}

/// L(Pi x chi)^2 / eps(Pi x chi) times alpha(f+, f-; chi), with
/// Z(f-, chi^{-1}) = eps Z(Pi(J) f-, chi) from the functional equation.
template <CoeffRing R>
QuotientElem<R> q_distribution_eval(const StablePair& plus, const StablePair& minus, int n, const MultChar& chi, const SatakeData& pi,
                                    const PsiSystem& psi, const typename R::context_type& base) {
  if (n < 1) throw AdmissibilityError("depth n must be >= 1");
  for (const auto* v : {&plus.f, &plus.jf, &minus.f, &minus.jf})
    if (!v->supported_in_principal_units(n))
      throw AdmissibilityError("pair is not " + std::to_string(n) + "-admissible: support leaves (1+p^n)^x");
  if (chi.conductor() > n) throw AdmissibilityError("character is not trivial on (1+p^n)^x");
  const auto eps = epsilon_rep<R>(pi, chi, psi, base);
  const auto L = l_function<R>(pi, chi, base);
  const auto zp = zeta<R>(plus.f, chi, pi, base);
  const auto zm = widen_mul(eps, zeta<R>(minus.jf, chi, pi, base));
  const auto alpha = widen_mul(zp, zm) * split_normalizer_inverse<R>(pi, plus.f.prime(), base);
  const auto ring = alpha.context();
  return alpha * inverse(embed_cyclotomic(eps, ring)) * (L * L);
}

/// The closed form of q_distribution_eval: normalizer^{-1} Q'(f+) Q'(Pi(J) f-).
inline Rational q_distribution_closed(const StablePair& plus, const StablePair& minus, const SatakeData& pi) {
  return unit_integral(plus.f) * unit_integral(minus.jf) * split_normalizer_inverse<Rational>(pi, plus.f.prime(), RationalField{});
}

/// chi_v on E_v^x: a pair (chi_b, chi_c) at a split place, or an unramified
/// character of the unramified quadratic extension given by chi_v(pi).
struct PlaceCharacter {
  enum class Kind { split, inert_unramified };
  Kind kind;
  std::vector<MultChar> pair;  // split only
  Rational pi_value_e;         // inert only

  static PlaceCharacter split(MultChar b, MultChar c) { return {Kind::split, {std::move(b), std::move(c)}, Rational(0)}; }
  static PlaceCharacter inert(Rational v) { return {Kind::inert_unramified, {}, std::move(v)}; }

  int sign() const { return kind == Kind::split ? pair[0].sign() * pair[1].sign() : 1; }
};

struct SignReport {
  int epsilon;        // eps(1/2, Pi_v, chi_v)
  int chi_minus_one;  // chi_v(-1)
  int eta_minus_one;  // eta_v(-1)
  int hasse;          // eps(B_v)
  int conductor;      // sum of abelian conductor exponents
  Cyclotomic product; // unnormalized epsilon product
};

/// eps(B) solving eps = chi(-1) eta(-1) eps(B).
inline int required_hasse(int epsilon, int chi_minus_one, int eta_minus_one) { return epsilon * chi_minus_one * eta_minus_one; }

/// eps(1/2, Pi_v, chi_v) as the product of abelian epsilon factors of the
/// parameter, normalized by l^{-N/2}; it must come out as +1 or -1.
inline SignReport saito_tunnell_sign(const SatakeData& pi, const PlaceCharacter& chi, const MultChar& eta, const PsiSystem& psi) {
  const RationalField QQ;
  SignReport r{0, chi.sign(), eta.sign(), 0, 0, trivial_cyclotomic<Rational>(QQ).one()};
  if (chi.kind == PlaceCharacter::Kind::split) {
    if (!eta.is_trivial()) throw DomainError("eta must be trivial at a split place");
  } else if (!eta.is_unramified() || eta.pi_value() != Rational(-1)) {
    throw DomainError("eta must be the unramified quadratic character at an inert place");
  }
  if (pi.kind == SatakeData::Kind::supercuspidal) {
    if (!pi.epsilon_sign) throw MissingDataError("supercuspidal epsilon factor not supplied");
    r.epsilon = *pi.epsilon_sign;
    r.hasse = required_hasse(r.epsilon, r.chi_minus_one, r.eta_minus_one);
    return r;
  }
  const auto l = static_cast<long long>(pi.prime());
  if (chi.kind == PlaceCharacter::Kind::split) {
    if (!(pi.central() * chi.pair[0] * chi.pair[1]).is_trivial())
      throw DomainError("central character is not compatible with chi_v");
    for (const auto& c : chi.pair) {
      r.product = widen_mul(r.product, epsilon_rep<Rational>(pi, c, psi, QQ));
      r.conductor += conductor_rep(pi, c);
    }
  } else {
    // Base change to the unramified quadratic extension E: mu |-> mu o N,
    // (mu o N)(pi) = mu(pi)^2.
    const auto w = pi.central();
    if (!w.is_unramified() || w.pi_value() * chi.pi_value_e != Rational(1))
      throw DomainError("central character is not compatible with chi_v");
    for (const auto& m : pi.mu)
      if (!m.is_unramified()) throw DomainError("ramified data at an inert place is not modeled");
    if (pi.kind == SatakeData::Kind::special)
      r.product = r.product * Rational(-1) * (pi.mu[0].pi_value() * pi.mu[0].pi_value() * chi.pi_value_e);
  }
  if (r.conductor % 2) throw ConsistencyError("odd total conductor for a self-dual parameter");
  const auto v = r.product * inverse(pow(Rational(l), static_cast<unsigned long long>(r.conductor / 2)));
  if (!v.in_base() || (v.base_value() != Rational(1) && v.base_value() != Rational(-1)))
    throw ConsistencyError("epsilon product is not a sign: " + v.str());
  r.epsilon = v.base_value() == Rational(1) ? 1 : -1;
  r.hasse = required_hasse(r.epsilon, r.chi_minus_one, r.eta_minus_one);
  return r;
}

}  // namespace ltk
