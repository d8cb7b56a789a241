#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ltk/local_factors.hpp"
#include "ltk/mellin.hpp"

namespace ltk {

/// A finite abelian group prod Z/n_i with elements as exponent vectors.
class TameGroup {
 public:
  explicit TameGroup(std::vector<std::uint64_t> invariants = {}) : inv_(std::move(invariants)) {
    for (auto n : inv_)
      if (n == 0) throw DomainError("tame group invariants must be positive");
  }
  using Element = std::vector<std::uint64_t>;

  const std::vector<std::uint64_t>& invariants() const { return inv_; }
  std::uint64_t order() const {
    std::uint64_t o = 1;
    for (auto n : inv_) o *= n;
    return o;
  }
  std::uint64_t exponent() const {
    std::uint64_t e = 1;
    for (auto n : inv_) e = lcm_u(e, n);
    return e;
  }
  Element identity() const { return Element(inv_.size(), 0); }
  Element normalize(Element g) const {
    if (g.size() != inv_.size()) throw DomainError("tame element has the wrong rank");
    for (std::size_t i = 0; i < g.size(); ++i) g[i] %= inv_[i];
    return g;
  }
  Element add(const Element& a, const Element& b) const {
    Element c(inv_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = (a[i] + b[i]) % inv_[i];
    return c;
  }
  std::vector<Element> elements() const {
    std::vector<Element> out;
    Element a = identity();
    while (true) {
      out.push_back(a);
      std::size_t i = 0;
      while (i < a.size() && ++a[i] == inv_[i]) a[i++] = 0;
      if (i == a.size()) break;
    }
    return out;
  }
  /// xi_a(g) = zeta_exponent^{sum a_i g_i exponent/n_i}; returns that exponent.
  std::uint64_t pairing(const Element& a, const Element& g) const {
    const auto E = exponent();
    unsigned __int128 s = 0;
    for (std::size_t i = 0; i < inv_.size(); ++i) s += static_cast<unsigned __int128>(a[i] % inv_[i]) * (g[i] % inv_[i]) % inv_[i] * (E / inv_[i]);
    return static_cast<std::uint64_t>(s % E);
  }
  template <CoeffRing R>
  QuotientElem<R> character_value(const Element& a, const Element& g, const QuotientRing<R>& ring) const {
    const auto E = exponent();
    if (ring.root_order() % E != 0) throw DomainError("ring lacks the tame roots of unity");
    return ring.root_power(static_cast<long long>(pairing(a, g) * (ring.root_order() / E)));
  }

 private:
  std::vector<std::uint64_t> inv_;
};

/// Tame character, p-part and weight: t |-> xi(t) chi_p(t) t^k.
struct ToyCharacter {
  TameGroup::Element tame;
  UnitCharacter chi_p;
  int k = 0;
};

namespace detail {

/// j with chi_p(zeta) zeta^k = omega(zeta)^j on mu_{p-1}.
inline std::uint64_t delta_index(const UnitCharacter& chi, int k) {
  const auto p = chi.prime();
  if (p == 2) return 0;
  std::uint64_t j0 = 0;
  if (chi.level() >= 1) {
    const auto n = chi.level();
    const auto mod = ipow(p, static_cast<unsigned>(n));
    const auto g = primitive_root_mod(static_cast<unsigned long>(p));
    const auto w = powmod(g, ipow(p, static_cast<unsigned>(n - 1)), mod);  // omega(g) mod p^n
    const auto E = chi.exponent();
    const auto e = chi.value_exponent(static_cast<long long>(w));
    j0 = static_cast<std::uint64_t>(static_cast<unsigned __int128>(e) * (p - 1) / E);
  }
  return (j0 + mod_u(k, p - 1)) % (p - 1);
}

}  // namespace detail

/// A finitely supported distribution on Z_p^x x C with its components over
/// Delta = characters of mu_{p-1} x characters of C. Component (j, xi) is the
/// Dirac series sum m_{t,g} omega^j(t) xi(g) (1+S)^t.
template <CoeffRing R>
class AnticycDistribution {
 public:
  using Key = std::pair<long long, TameGroup::Element>;

  AnticycDistribution(unsigned long p, TameGroup C, const typename R::context_type& base)
      : p_(p), C_(std::move(C)), ring_(cyclotomic_ring_of_order<R>(lcm_u(p - 1, C_.exponent()), base)) {}

  unsigned long prime() const { return p_; }
  const TameGroup& tame_group() const { return C_; }
  const QuotientRing<R>& ring() const { return ring_; }
  const std::map<Key, QuotientElem<R>>& masses() const { return masses_; }

  void add_dirac(long long t, const TameGroup::Element& g, const QuotientElem<R>& mass) {
    if (t <= 0 || mod_u(t, p_) == 0) throw DomainError("Dirac point " + std::to_string(t) + " is not a positive unit");
    if (ring_.root_order() % mass.context().root_order() != 0) {
      ring_ = detail::widen(ring_, mass.context().root_order());
      for (auto& [k, x] : masses_) x = embed_cyclotomic(x, ring_);
    }
    const auto m = embed_cyclotomic(mass, ring_);
    auto [it, fresh] = masses_.try_emplace(Key{t, C_.normalize(g)}, m);
    if (!fresh) it->second += m;
  }

  /// The component series for Delta index (j, xi).
  DiscFunction<QuotientElem<R>> component(std::uint64_t j, const TameGroup::Element& xi) const {
    long long top = 0;
    for (const auto& [k, m] : masses_) top = std::max(top, k.first);
    const auto omega = UnitCharacter::teichmuller_power(p_, 1, static_cast<long long>(j));
    std::vector<QuotientElem<R>> dirac(static_cast<std::size_t>(top) + 1, ring_.zero());
    for (const auto& [k, m] : masses_)
      dirac[static_cast<std::size_t>(k.first)] += m * omega.value(k.first, ring_) * C_.character_value(xi, k.second, ring_);
    return from_q_basis<QuotientElem<R>>(ring_, dirac, static_cast<int>(top));
  }

  /// Evaluation at xi chi_p <k> through the single component it sees.
  QuotientElem<R> evaluate(const ToyCharacter& chi) const {
    const auto j = detail::delta_index(chi.chi_p, chi.k);
    const auto comp = component(j, chi.tame);
    const auto m = to_q_basis(comp);
    // lambda = chi_p omega^{-j} t^k is trivial on mu_{p-1}.
    const auto lam = chi.chi_p.lift(std::max(chi.chi_p.level(), 1)) * UnitCharacter::teichmuller_power(p_, 1, -static_cast<long long>(j));
    const auto ring = detail::widen(ring_, lam.order());
    auto s = ring.zero();
    const auto& base = ring_.base();
    for (std::size_t u = 0; u < m.size(); ++u) {
      if (m[u].is_zero()) continue;
      s += embed_cyclotomic(m[u], ring) * lam.value(static_cast<long long>(u), ring) *
           pow(base.from_int(static_cast<long long>(u)), static_cast<unsigned long long>(chi.k));
    }
    return s;
  }

  /// sum m_{t,g} xi(g) chi_p(t) t^k, without components.
  QuotientElem<R> evaluate_direct(const ToyCharacter& chi) const {
    const auto ring = detail::widen(ring_, chi.chi_p.order());
    auto s = ring.zero();
    for (const auto& [k, m] : masses_)
      s += embed_cyclotomic(m, ring) * C_.character_value(chi.tame, k.second, ring) * chi.chi_p.value(k.first, ring) *
           pow(ring_.base().from_int(k.first), static_cast<unsigned long long>(chi.k));
    return s;
  }

  /// [t1, g1] * [t2, g2] = [t1 t2, g1 + g2].
  AnticycDistribution convolve(const AnticycDistribution& o) const {
    AnticycDistribution out(p_, C_, ring_.base());
    for (const auto& [a, x] : masses_)
      for (const auto& [b, y] : o.masses_) out.add_dirac(a.first * b.first, C_.add(a.second, b.second), x * y);
    return out;
  }

 private:
  unsigned long p_;
  TameGroup C_;
  QuotientRing<R> ring_;
  std::map<Key, QuotientElem<R>> masses_;
};

/// A Dirac [t] of the local anticyclotomic group with its circle coordinate.
struct LocalDirac {
  long long t;
  long long t_circ = 1;
  Rational mass = Rational(1);
};

/// bw: [t] |-> omega_p(t_circ) [t], placed at the identity of C.
template <CoeffRing R>
AnticycDistribution<R> weight_map_bw(const std::vector<LocalDirac>& d, const UnitCharacter& omega, const TameGroup& C,
                                     const typename R::context_type& base) {
  AnticycDistribution<R> out(omega.prime(), C, base);
  const auto ring = cyclotomic_ring_of_order<R>(omega.order(), base);
  for (const auto& x : d) out.add_dirac(x.t, C.identity(), omega.value(x.t_circ, ring) * base.from_rational(x.mass));
  return out;
}

/// Points y of Y, each labelled by the c in C with y = c y_0.
template <CoeffRing R>
struct CMPoint {
  std::string id;
  TameGroup::Element c;
  DiscFunction<R> phi;
};

template <CoeffRing R>
class CMCosetModel {
 public:
  CMCosetModel(FormalGroupLaw<R> F, TameGroup C, std::vector<CMPoint<R>> points)
      : F_(std::move(F)), C_(std::move(C)), points_(std::move(points)) {
    if (points_.size() != C_.order()) throw DomainError("|Y| must equal |C|");
    std::map<TameGroup::Element, int> seen;
    for (auto& y : points_) {
      y.c = C_.normalize(y.c);
      if (seen[y.c]++) throw DomainError("C does not act simply transitively on Y");
    }
  }

  const FormalGroupLaw<R>& group() const { return F_; }
  const TameGroup& tame_group() const { return C_; }
  const std::vector<CMPoint<R>>& points() const { return points_; }

  /// The model with phi'_y = phi_{c y}.
  CMCosetModel translated(const TameGroup::Element& c) const {
    auto pts = points_;
    for (auto& y : pts)
      for (const auto& z : points_)
        if (z.c == C_.add(c, y.c)) y.phi = z.phi;
    return CMCosetModel(F_, C_, std::move(pts));
  }

 private:
  FormalGroupLaw<R> F_;
  TameGroup C_;
  std::vector<CMPoint<R>> points_;
};

namespace detail {

template <CoeffRing R>
void require_stable(const CMCosetModel<R>& model) {
  for (const auto& y : model.points())
    if (!is_stable(model.group(), y.phi).stable) throw StabilityError("phi_" + y.id + " is not stable");
}

template <CoeffRing R>
QuotientElem<R> tame_average(const CMCosetModel<R>& model, const TameGroup::Element& xi,
                             const std::vector<QuotientElem<R>>& values) {
  const auto& C = model.tame_group();
  const auto& base = model.group().context();
  auto s = cyclotomic_ring_of_order<R>(C.exponent(), base).zero();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto ring = detail::widen(values[i].context(), C.exponent());
    s = widen_add(s, embed_cyclotomic(values[i], ring) * C.character_value(xi, model.points()[i].c, ring));
  }
  return s * inverse(base.from_int(static_cast<long long>(model.points().size())));
}

}  // namespace detail

/// |Y|^{-1} sum_y xi(c_y) M(phi_y)(chi_p <k>)(0).
template <CoeffRing R>
QuotientElem<R> universal_period_eval(const CMCosetModel<R>& model, const ToyCharacter& chi, const PsiSystem& psi) {
  if (chi.k < 0) throw DomainError("universal_period_eval needs k >= 0");
  detail::require_stable(model);
  const auto& F = model.group();
  std::vector<QuotientElem<R>> vals;
  for (const auto& y : model.points()) {
    if (y.phi.degree() > std::min(y.phi.trunc(), F.trunc()) - chi.k)
      throw DomainError("phi_" + y.id + " has Dirac mass beyond degree D - k");
    if (chi.chi_p.is_trivial()) {
      const auto t = mellin_at_weight(F, y.phi, chi.k);
      vals.push_back(trivial_cyclotomic<R>(F.context()).embed(t[0]));
    } else {
      vals.push_back(mellin_at_character(F, y.phi, chi.chi_p, chi.k, psi)[0]);
    }
  }
  return detail::tame_average(model, chi.tame, vals);
}

/// P+(chi) P-(chi) / Q(chi).
template <CoeffRing R>
QuotientElem<R> toy_l_ratio_eval(const QuotientElem<R>& p_plus, const QuotientElem<R>& p_minus, const QuotientElem<R>& q) {
  if (q.is_zero()) throw ExcludedCharacterError("Q(chi) = 0: character excluded from the L-ratio");
  const auto num = widen_mul(p_plus, p_minus);
  const auto ring = detail::widen(num.context(), q.context().root_order());
  return embed_cyclotomic(num, ring) * inverse(embed_cyclotomic(q, ring));
}

template <CoeffRing R>
struct Weight0Check {
  QuotientElem<R> value;
  bool agree;
};

/// The weight-0 period as universal_period_eval(k = 0) and as
/// |Y|^{-1} sum_y xi(c_y) Theta(M(g_y)(chi_p))(0) with Theta g_y = phi_y.
template <CoeffRing R>
Weight0Check<R> weight0_waldspurger_check(const CMCosetModel<R>& model, const ToyCharacter& chi, const PsiSystem& psi) {
  if (chi.k != 0) throw DomainError("weight0_waldspurger_check needs k = 0");
  const auto a = universal_period_eval(model, chi, psi);
  const auto& F = model.group();
  std::vector<QuotientElem<R>> vals;
  for (const auto& y : model.points()) {
    const auto g = stable_primitive(F, y.phi);
    if (chi.chi_p.is_trivial()) {
      vals.push_back(trivial_cyclotomic<R>(F.context()).embed(theta(F, g)[0]));
    } else {
      vals.push_back(theta(F, mellin_at_character(F, g, chi.chi_p, 0, psi))[0]);
    }
  }
  const auto b = detail::tame_average(model, chi.tame, vals);
  const auto ring = detail::widen(a.context(), b.context().root_order());
  return {a, embed_cyclotomic(a, ring) == embed_cyclotomic(b, ring)};
}

}  // namespace ltk
