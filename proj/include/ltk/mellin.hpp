#pragma once

#include <type_traits>
#include <vector>

#include "ltk/characters.hpp"
#include "ltk/lubin_tate.hpp"

namespace ltk {

/// A function on the Lubin-Tate disc: a polynomial in S of degree <= D,
/// stored as a truncated series. Polynomials keep torsion translation exact.
template <CoeffRing R>
using DiscFunction = TruncatedSeries<R>;

namespace detail {

inline const std::vector<std::vector<Rational>>& binomials(int n) {
  static thread_local std::vector<std::vector<Rational>> table;
  while (static_cast<int>(table.size()) <= n) {
    const auto k = table.size();
    std::vector<Rational> row(k + 1, Rational(1));
    for (std::size_t j = 1; j < k; ++j) row[j] = table[k - 1][j - 1] + table[k - 1][j];
    table.push_back(std::move(row));
  }
  return table;
}

template <CoeffRing R>
void require_multiplicative(const FormalGroupLaw<R>& F, const char* what) {
  if (!F.is_multiplicative())
    throw DomainError(std::string(what) + " is implemented on the multiplicative model only");
}

}  // namespace detail

/// Coefficients m_u with phi(S) = sum_u m_u (1+S)^u (the Amice/Dirac basis).
template <class R>
std::vector<R> to_q_basis(const TruncatedSeries<R>& phi) {
  const int D = phi.trunc();
  const auto& C = detail::binomials(D);
  const auto& ctx = phi.context();
  std::vector<R> m(static_cast<std::size_t>(D) + 1, ctx.zero());
  for (int k = 0; k <= D; ++k) {
    const auto& c = phi[static_cast<std::size_t>(k)];
    if (c.is_zero()) continue;
    for (int u = 0; u <= k; ++u) {
      const R term = c * ctx.from_rational(C[k][u]);
      if ((k - u) % 2) m[static_cast<std::size_t>(u)] -= term;
      else m[static_cast<std::size_t>(u)] += term;
    }
  }
  return m;
}

template <class R>
TruncatedSeries<R> from_q_basis(const typename R::context_type& ctx, const std::vector<R>& m, int trunc) {
  const int top = static_cast<int>(m.size()) - 1;
  const auto& C = detail::binomials(top);
  TruncatedSeries<R> out(ctx, trunc);
  std::vector<R> c(static_cast<std::size_t>(trunc) + 1, ctx.zero());
  for (int u = 0; u <= top; ++u) {
    const auto& x = m[static_cast<std::size_t>(u)];
    if (x.is_zero()) continue;
    for (int k = 0; k <= std::min(u, trunc); ++k) c[static_cast<std::size_t>(k)] += x * ctx.from_rational(C[u][k]);
  }
  return TruncatedSeries<R>(ctx, std::move(c), trunc);
}

/// (1+S)^u truncated at D.
template <CoeffRing R>
TruncatedSeries<R> dirac(const typename R::context_type& ctx, long long u, int D) {
  std::vector<R> m(static_cast<std::size_t>(std::max<long long>(u, 0)) + 1, ctx.zero());
  if (u < 0) throw DomainError("dirac: negative exponent");
  m[static_cast<std::size_t>(u)] = ctx.one();
  return from_q_basis<R>(ctx, m, D);
}

template <CoeffRing R>
struct StabilityReport {
  bool stable;
  TruncatedSeries<R> witness;  // sum over Ker[p] of the translates
};

/// Sum over z in Ker[p] of phi(F(S, z)): phi plus the trace of its translate
/// by the level-one torsion point.
template <CoeffRing R>
TruncatedSeries<R> stability_witness(const FormalGroupLaw<R>& F, const DiscFunction<R>& phi) {
  const auto T = torsion_ring(F, 1);
  const auto moved = F.translate(extend_scalars(phi, T.ring), T.point());
  auto w = phi;
  for (int i = 0; i <= phi.trunc(); ++i) w.set(i, w[static_cast<std::size_t>(i)] + moved[static_cast<std::size_t>(i)].trace());
  return w;
}

template <CoeffRing R>
StabilityReport<R> is_stable(const FormalGroupLaw<R>& F, const DiscFunction<R>& phi) {
  auto w = stability_witness(F, phi);
  const bool ok = w.is_zero();
  return {ok, std::move(w)};
}

/// phi - p^{-1} sum_z phi(F(S, z)); exact rationals only.
template <CoeffRing R>
DiscFunction<R> stabilize(const FormalGroupLaw<R>& F, const DiscFunction<R>& phi) {
  if constexpr (!std::is_same_v<R, Rational>) {
    throw PrecisionError("stabilize divides by p; use exact rationals");
  } else {
    return phi - stability_witness(F, phi) * Rational(1, static_cast<long long>(F.p()));
  }
}

/// phi(F(S, nu(1/p^n))) = psi(1/p^n) phi in the level-n torsion ring.
template <CoeffRing R>
bool is_admissible(const FormalGroupLaw<R>& F, const DiscFunction<R>& phi, int n, const PsiSystem& psi) {
  if (n > psi.n_max) throw LevelError("admissibility level " + std::to_string(n) + " exceeds psi");
  if (n == 0) return true;
  detail::require_multiplicative(F, "is_admissible");
  const auto T = torsion_ring(F, n);
  const auto zeta = T.ring.one() + T.point();
  const auto pn = ipow(F.p(), static_cast<unsigned>(n));
  const auto psi_x = psi.sign > 0 ? zeta : pow(zeta, pn - 1);
  const auto ext = extend_scalars(phi, T.ring);
  auto scaled = ext;
  scaled *= psi_x;
  return F.translate(ext, T.point()) == scaled;
}

template <CoeffRing R>
DiscFunction<R> theta_power(const FormalGroupLaw<R>& F, DiscFunction<R> phi, int k) {
  for (int i = 0; i < k; ++i) phi = theta(F, phi);
  return phi;
}

/// M(phi)(<k>) computed as [Theta_Y^k phi(F(X,Y))]_{Y=0} and as Theta^k phi;
/// the two must agree mod T^{D-k+1}.
template <CoeffRing R>
DiscFunction<R> mellin_at_weight(const FormalGroupLaw<R>& F, const DiscFunction<R>& phi, int k) {
  if (k < 0) throw DomainError("mellin_at_weight needs k >= 0");
  const int D = std::min(phi.trunc(), F.trunc());
  if (k > D) throw DomainError("weight exceeds truncation degree");
  const auto law = F.law().truncated(D, k);
  auto G = compose_bivariate(phi.truncated(D), law);
  const auto w = F.invariant_derivative();
  for (int i = 0; i < k; ++i) G = G.dy().times_y_series(w);
  const auto route_a = G.at_y_zero();
  const auto route_b = theta_power(F, phi.truncated(D), k);
  if (route_a != route_b) throw ConsistencyError("mellin_at_weight: routes disagree at k=" + std::to_string(k));
  return route_b;
}

/// The unique stable g with Theta g = phi, via Theta^{-1} on the Dirac basis.
template <CoeffRing R>
DiscFunction<R> stable_primitive_dirac(const FormalGroupLaw<R>& F, const DiscFunction<R>& phi) {
  detail::require_multiplicative(F, "stable_primitive");
  auto m = to_q_basis(phi);
  const auto& ctx = phi.context();
  for (std::size_t u = 0; u < m.size(); ++u) {
    if (m[u].is_zero()) continue;
    if (u % F.p() == 0) throw DomainError("stable_primitive: input is not stable (mass at u=" + std::to_string(u) + ")");
    m[u] *= inverse(ctx.from_int(static_cast<long long>(u)));
  }
  return from_q_basis<R>(ctx, m, phi.trunc());
}

/// Exact-rational route: g' = phi lambda', integrate, then remove the constant
/// that the stability witness detects.
template <CoeffRing R>
DiscFunction<R> stable_primitive(const FormalGroupLaw<R>& F, const DiscFunction<R>& phi) {
  if (!is_stable(F, phi).stable) throw DomainError("stable_primitive: input is not stable");
  if constexpr (!std::is_same_v<R, Rational>) {
    return stable_primitive_dirac(F, phi);
  } else {
    const int D = phi.trunc();
    auto g = (phi.truncated(D - 1) * F.invariant_derivative().inverse_series()).integral();
    const auto w = stability_witness(F, g);
    for (int i = 1; i <= D; ++i)
      if (!w[static_cast<std::size_t>(i)].is_zero()) throw ConsistencyError("stable_primitive: nonconstant residue");
    g.set(0, g[0] - w[0] * Rational(1, static_cast<long long>(F.p())));
    if (theta(F, g) != phi.truncated(D - 1)) throw ConsistencyError("stable_primitive: Theta g != phi");
    return g;
  }
}

/// p^{-n} sum_{x in p^{-n}Z/Z} [sum_u chi(u) psi(-xu)] (Theta^k phi)(F(X, nu(x))),
/// with n the level of chi. Translation by nu(c/p^n) multiplies the Dirac mass
/// at u by psi(c/p^n)^u.
template <CoeffRing R>
DiscFunction<QuotientElem<R>> mellin_at_character(const FormalGroupLaw<R>& F, const DiscFunction<R>& phi,
                                                  const UnitCharacter& chi, int k, const PsiSystem& psi) {
  detail::require_multiplicative(F, "mellin_at_character");
  if (chi.prime() != F.p() || psi.p != F.p()) throw DomainError("character and psi must live at p");
  const int n = chi.level();
  if (n > psi.n_max) throw LevelError("character level exceeds the available torsion level");
  const auto ring = character_ring<R>(F.context(), chi);
  const auto tk = mellin_at_weight(F, phi, k);
  const auto m = to_q_basis(tk);
  const auto pn = static_cast<long long>(ipow(F.p(), static_cast<unsigned>(n)));
  const auto units = chi.group().elements();
  const auto M = ring.root_order();
  // G(c) = sum_u chi(u) psi(-c u / p^n).
  std::vector<QuotientElem<R>> G;
  for (long long c = 0; c < pn; ++c) {
    std::vector<R> acc(M, F.context().zero());
    for (auto u : units) {
      const auto e = chi.root_exponent(static_cast<long long>(u), M) + static_cast<std::uint64_t>(psi.root_exponent(-c * static_cast<long long>(u), n, M));
      acc[e % M] += F.context().one();
    }
    G.push_back(ring.from_coefficients(std::move(acc)));
  }
  std::vector<QuotientElem<R>> out(m.size(), ring.zero());
  for (std::size_t u = 0; u < m.size(); ++u) {
    if (m[u].is_zero()) continue;
    auto s = ring.zero();
    for (long long c = 0; c < pn; ++c) s += G[static_cast<std::size_t>(c)].times_root(psi.root_exponent(c * static_cast<long long>(u), n, M));
    out[u] = divide_by_p_power(s, F.p(), n) * m[u];
  }
  return from_q_basis<QuotientElem<R>>(ring, out, tk.trunc());
}

/// Measure route: sum_u chi(u) u^k m_u (1+S)^u.
template <CoeffRing R>
DiscFunction<QuotientElem<R>> mellin_measure_route(const FormalGroupLaw<R>& F, const DiscFunction<R>& phi,
                                                   const UnitCharacter& chi, int k) {
  detail::require_multiplicative(F, "mellin_measure_route");
  const auto ring = character_ring<R>(F.context(), chi);
  const auto m = to_q_basis(phi);
  std::vector<QuotientElem<R>> out(m.size(), ring.zero());
  for (std::size_t u = 0; u < m.size(); ++u) {
    if (m[u].is_zero()) continue;
    out[u] = chi.value(static_cast<long long>(u), ring) * ring.embed(m[u] * pow(F.context().from_int(static_cast<long long>(u)), static_cast<unsigned long long>(k)));
  }
  return from_q_basis<QuotientElem<R>>(ring, out, phi.trunc() - k);
}

/// Base-ring series of a series whose coefficients all lie in the base.
template <CoeffRing R>
DiscFunction<R> descend(const DiscFunction<QuotientElem<R>>& s) {
  const auto& base = s.context().base();
  TruncatedSeries<R> out(base, s.trunc());
  for (int i = 0; i <= s.trunc(); ++i) out.set(i, s[static_cast<std::size_t>(i)].base_value());
  return out;
}

}  // namespace ltk
