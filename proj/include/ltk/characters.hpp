#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ltk/cyclotomic.hpp"
#include "ltk/number_theory.hpp"

namespace ltk {

/// (Z/l^n)^x as an explicit product of cyclic groups with discrete-log table.
/// For odd l it is cyclic; for l = 2 it is <-1> x <5>.
class UnitGroup {
 public:
  UnitGroup(std::uint64_t l, int n);

  std::uint64_t prime() const { return l_; }
  int level() const { return n_; }
  std::uint64_t modulus() const { return mod_; }
  std::uint64_t order() const { return order_; }
  const std::vector<std::uint64_t>& generators() const { return gens_; }
  const std::vector<std::uint64_t>& generator_orders() const { return orders_; }
  /// Exponent vector of u (u must be a unit mod l^n).
  const std::vector<std::uint64_t>& log(std::uint64_t u) const;
  bool is_unit(long long u) const { return n_ == 0 || mod_u(u, l_) != 0; }
  std::vector<std::uint64_t> elements() const;

 private:
  std::uint64_t l_;
  int n_;
  std::uint64_t mod_;
  std::uint64_t order_;
  std::vector<std::uint64_t> gens_;
  std::vector<std::uint64_t> orders_;
  std::shared_ptr<const std::map<std::uint64_t, std::vector<std::uint64_t>>> logs_;
};

/// Finite-order character of (Z/l^n)^x. chi(g_i) = exp(2 pi i e_i / o_i) for
/// the generators g_i of UnitGroup; values are realized inside any ring that
/// has roots of unity of order exponent().
class UnitCharacter {
 public:
  /// Trivial character at level 0.
  explicit UnitCharacter(std::uint64_t l);
  UnitCharacter(std::uint64_t l, int level, std::vector<std::uint64_t> exps);

  static UnitCharacter trivial(std::uint64_t l, int level = 0) {
    return UnitCharacter(l, level, std::vector<std::uint64_t>(level == 0 ? 0 : UnitGroup(l, level).generators().size(), 0));
  }
  /// Every character of (Z/l^n)^x.
  static std::vector<UnitCharacter> all(std::uint64_t l, int level);
  /// The quadratic (Legendre) character mod an odd prime l.
  static UnitCharacter quadratic(std::uint64_t l);
  /// Character of (Z/l^n)^x with values in mu_{l-1}: chi(u) = omega(u)^j.
  static UnitCharacter teichmuller_power(std::uint64_t l, int level, long long j);

  std::uint64_t prime() const { return group_.prime(); }
  int level() const { return group_.level(); }
  const UnitGroup& group() const { return group_; }
  const std::vector<std::uint64_t>& exponents() const { return exps_; }

  /// Least common multiple of the generator orders; the values lie in mu_E.
  std::uint64_t exponent() const;
  /// Order of the character.
  std::uint64_t order() const;
  /// Smallest c with chi trivial on 1 + l^c (0 when chi is trivial).
  int conductor() const;
  bool is_trivial() const { return order() == 1; }

  /// chi(u) = zeta_E^k; returns k mod E. Throws DomainError on non-units.
  std::uint64_t value_exponent(long long u) const;

  /// chi(u) = zeta_M^e for any M divisible by order(); returns e. u must be a unit.
  std::uint64_t root_exponent(long long u, std::uint64_t M) const {
    const auto ord = order();
    if (M % ord != 0) throw DomainError("root order " + std::to_string(M) + " is not a multiple of the character order");
    return value_exponent(u) / (exponent() / ord) * (M / ord);
  }

  /// chi(u) inside ring, as a power of the ring's primitive root of unity of
  /// order order(); zero for non-units when level >= 1.
  template <class Ring>
  auto value(long long u, const Ring& ring) const {
    if (level() >= 1 && !group_.is_unit(u)) return ring.zero();
    const auto ord = order();
    const auto k = value_exponent(u) / (exponent() / ord);
    return pow(primitive_root_of_unity(ring, static_cast<unsigned long>(ord)), k);
  }

  /// Same character seen at a higher level.
  UnitCharacter lift(int level) const;
  /// The same character at any level >= conductor().
  UnitCharacter at_level(int level) const;
  /// at_level(conductor()).
  UnitCharacter primitive() const { return at_level(conductor()); }
  UnitCharacter inverse() const;
  friend UnitCharacter operator*(const UnitCharacter& a, const UnitCharacter& b);
  /// Equality as functions on units (levels may differ).
  friend bool operator==(const UnitCharacter& a, const UnitCharacter& b);

  std::string str() const;

 private:
  UnitGroup group_;
  std::vector<std::uint64_t> exps_;
};

/// Compatible primitive roots zeta_{p^n}, n <= n_max, of an additive
/// character of level 0; sign -1 gives the inverse character.
struct PsiSystem {
  unsigned long p;
  int n_max;
  int sign = 1;

  PsiSystem inverse() const { return PsiSystem{p, n_max, -sign}; }
  /// psi(c / p^n) = zeta_M^e in a ring of root order M divisible by p^n; returns e.
  long long root_exponent(long long c, int n, std::uint64_t M) const {
    if (n > n_max) throw LevelError("psi is only fixed up to level " + std::to_string(n_max));
    const auto pn = ipow(p, static_cast<unsigned>(n));
    if (M == 0 || M % pn != 0) throw DomainError("ring has no primitive " + std::to_string(pn) + "-th root of unity");
    return static_cast<long long>(mod_u(sign * c, pn) * (M / pn));
  }
  template <CoeffRing R>
  QuotientElem<R> value(long long c, int n, const QuotientRing<R>& ring) const {
    return ring.root_power(root_exponent(c, n, ring.root_order()));
  }
  /// zeta_{p^{n+1}}^p = zeta_{p^n} for all n < n_max, checked in Q(zeta_{p^n_max}).
  bool compatible() const {
    if (n_max < 1) return true;
    const auto ring = cyclotomic_ring(p, n_max);
    for (int n = 1; n < n_max; ++n)
      if (pow(value(1, n + 1, ring), p) != value(1, n, ring)) return false;
    return pow(value(1, 1, ring), p) == ring.one() && value(1, 1, ring) != ring.one();
  }
};

/// Q(zeta_M) over the base ring with M = lcm(p^n, order of chi).
template <CoeffRing R>
QuotientRing<R> character_ring(const typename R::context_type& base, const UnitCharacter& chi) {
  const auto pn = ipow(chi.prime(), static_cast<unsigned>(chi.level()));
  return cyclotomic_ring_of_order<R>(lcm_u(pn, chi.order()), base);
}

}  // namespace ltk
