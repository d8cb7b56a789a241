#include <gtest/gtest.h>

#include <random>

#include "ltk/wald_local.hpp"

using namespace ltk;

namespace {

const RationalField QQ{};
constexpr int kCut = 50;

// Polynomials in a formal X, truncated at X^{kCut+1}.
using Poly = std::vector<Rational>;

Poly pmul(const Poly& a, const Poly& b) {
  Poly c(kCut + 1, Rational(0));
  for (std::size_t i = 0; i < a.size() && i <= kCut; ++i)
    for (std::size_t j = 0; j < b.size() && i + j <= kCut; ++j) c[i + j] += a[i] * b[j];
  return c;
}

Rational peval(const Poly& a, const Rational& x) {
  Rational s(0);
  for (std::size_t i = a.size(); i-- > 0;) s = s * x + a[i];
  return s;
}

int pdegree(const Poly& a) {
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
    if (!a[static_cast<std::size_t>(i)].is_zero()) return i;
  return -1;
}

Rational brute_unit_average(const UnitCharacter& chi) {
  if (chi.level() == 0) return Rational(1);
  const auto ring = cyclotomic_ring_of_order<Rational>(chi.order(), QQ);
  auto s = ring.zero();
  for (std::uint64_t u = 1; u < chi.group().modulus(); ++u)
    if (u % chi.prime()) s += chi.value(static_cast<long long>(u), ring);
  EXPECT_TRUE(s.in_base());
  return s.base_value() / Rational(static_cast<long long>(chi.group().order()));
}

// The zeta integral of a tail vector, summed shell by shell up to pi^{kCut}
// with X standing for (mu chi)(pi), times L(Pi x chi)^{-1} in which the
// parameter equal to mu chi is also X. Returns the truncated product.
Poly tail_oracle(const KirillovTail& t, const MultChar& chi, const SatakeData& pi) {
  const auto a = t.mu * chi;
  const auto avg = brute_unit_average(a.unit());
  Poly s(kCut + 1, Rational(0));
  for (int v = 0; v <= kCut; ++v) s[static_cast<std::size_t>(v)] = avg * Rational(t.kind == KirillovTail::Kind::sharp ? 1 : 1 + v);
  int log_uses = t.kind == KirillovTail::Kind::log ? 2 : 1;
  for (const auto& b : pi.l_parameters(chi)) {
    if (!b.is_unramified()) continue;
    Poly f(2, Rational(0));
    f[0] = 1;
    if (a.is_unramified() && b.pi_value() == a.pi_value() && log_uses > 0) {
      f[1] = -1;
      --log_uses;
    } else {
      f[0] = Rational(1) - b.pi_value();
    }
    s = pmul(s, f);
  }
  return s;
}

UnitCharacter random_unit(std::mt19937_64& rng, std::uint64_t l, int min_level, int max_level) {
  const int n = std::uniform_int_distribution<int>(min_level, max_level)(rng);
  auto all = UnitCharacter::all(l, n);
  while (true) {
    const auto& c = all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
    if (c.conductor() >= min_level) return c;
  }
}

Rational random_pi(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  int a = 0;
  while (a == 0) a = num(rng);
  return Rational(a, den(rng));
}

Cyclotomic brute_epsilon(const MultChar& a, const PsiSystem& psi) {
  if (a.is_unramified()) return cyclotomic_ring_of_order<Rational>(1, QQ).one();
  const auto n = a.conductor();
  const auto pn = ipow(a.prime(), static_cast<unsigned>(n));
  const auto ring = cyclotomic_ring_of_order<Rational>(lcm_u(pn, a.unit().order()), QQ);
  auto s = ring.zero();
  for (std::uint64_t u = 1; u < pn; ++u)
    if (u % a.prime()) s += a.unit().value(static_cast<long long>(u), ring) * psi.value(static_cast<long long>(u), n, ring);
  return s * pow(a.pi_value(), static_cast<unsigned long long>(n));
}

}  // namespace

TEST(Zeta, Examples) {
  const auto m1 = MultChar::unramified(3, Rational(2)), m2 = MultChar::unramified(3, Rational(5));
  const auto pi = SatakeData::principal(m1, m2);
  const auto chi = MultChar::unramified(3, Rational(1, 7));
  const auto z = zeta<Rational>(KirillovVector::sharp(m1), chi, pi, QQ);
  EXPECT_EQ(z.base_value(), inverse(l_factor(m2 * chi)));
  const auto ram = MultChar(UnitCharacter::quadratic(3), Rational(1, 7));
  EXPECT_TRUE(zeta<Rational>(KirillovVector::sharp(m1), ram, pi, QQ).is_zero());
  const auto sp = SatakeData::special(m1);
  EXPECT_EQ(zeta<Rational>(KirillovVector::sharp(m1), chi, sp, QQ).base_value(), Rational(1));
  // Unramified 1_{O^x}: Z = (1 - 2)(1 - 5).
  const auto one = MultChar::unramified(3, Rational(1));
  EXPECT_EQ(zeta<Rational>(KirillovVector::indicator(3, 1, 0), one, pi, QQ).base_value(), Rational(4));
}

TEST(Zeta, CaseTableAgainstTruncatedSums) {
  std::mt19937_64 rng(5);
  for (unsigned long l : {3UL, 5UL, 7UL})
    for (int t = 0; t < 20; ++t) {
      const MultChar m1(random_unit(rng, l, 0, 2), random_pi(rng)), m2(random_unit(rng, l, 0, 2), random_pi(rng));
      // Unramified and ramified twists of mu1.
      const MultChar chi_u(m1.unit().inverse(), random_pi(rng));
      MultChar chi_r = chi_u;
      while ((m1 * chi_r).is_unramified()) chi_r = MultChar(random_unit(rng, l, 1, 2), random_pi(rng));
      for (const auto& chi : {chi_u, chi_r}) {
        const std::vector<std::pair<KirillovVector, SatakeData>> cells = {
            {KirillovVector::sharp(m1), SatakeData::principal(m1, m2)},
            {KirillovVector::sharp(m1), SatakeData::special(m1)},
            {KirillovVector::log_weighted(m1), SatakeData::principal(m1, m1)},
        };
        for (const auto& [f, pi] : cells) {
          const auto poly = tail_oracle(*f.tail(), chi, pi);
          EXPECT_LE(pdegree(poly), 1) << "truncated sum does not telescope";
          const auto x = (m1 * chi).pi_value();
          const auto got = zeta<Rational>(f, chi, pi, QQ);
          ASSERT_TRUE(got.in_base());
          EXPECT_EQ(got.base_value(), peval(poly, x));
        }
      }
    }
}

TEST(Zeta, PaperCaseValues) {
  // mu1 chi unramified: L(mu2 chi)^{-1}; ramified: 0; special and log cases: 1 or 0.
  std::mt19937_64 rng(9);
  for (int t = 0; t < 30; ++t) {
    const MultChar m1(random_unit(rng, 5, 0, 2), random_pi(rng)), m2(random_unit(rng, 5, 0, 2), random_pi(rng));
    const MultChar chi(m1.unit().inverse(), random_pi(rng));
    EXPECT_EQ(zeta<Rational>(KirillovVector::sharp(m1), chi, SatakeData::principal(m1, m2), QQ).base_value(),
              inverse(l_factor(m2 * chi)));
    EXPECT_EQ(zeta<Rational>(KirillovVector::sharp(m1), chi, SatakeData::special(m1), QQ).base_value(), Rational(1));
    EXPECT_EQ(zeta<Rational>(KirillovVector::log_weighted(m1), chi, SatakeData::principal(m1, m1), QQ).base_value(), Rational(1));
  }
}

TEST(Zeta, Divergence) {
  const auto mu = MultChar::unramified(3, Rational(1));
  const auto other = MultChar::unramified(3, Rational(2));
  const auto chi = MultChar::unramified(3, Rational(1));
  EXPECT_THROW(zeta<Rational>(KirillovVector::sharp(mu), chi, SatakeData::principal(other, other), QQ), DivergenceError);
  EXPECT_EQ(zeta<Rational>(KirillovVector::sharp(mu), chi, SatakeData::principal(mu, other), QQ).base_value(), Rational(-1));
  EXPECT_THROW(zeta<Rational>(KirillovVector::log_weighted(mu), chi, SatakeData::principal(mu, other), QQ), DivergenceError);
}

TEST(Zeta, CosetMasses) {
  // 1_{2(1+9Z_3)} against the odd character mod 3: vol 1/6, chi(2) = -1.
  const auto q = MultChar(UnitCharacter::quadratic(3), Rational(4));
  const auto pi = SatakeData::principal(MultChar::unramified(3, 2), MultChar::unramified(3, 5));
  EXPECT_EQ(zeta<Rational>(KirillovVector::indicator(3, 2, 2), q, pi, QQ).base_value(), Rational(-1, 6));
  // pi^2 (1 + 3Z_3): chi(pi)^2 vol = 16 / 2.
  EXPECT_EQ(zeta<Rational>(KirillovVector::indicator(3, 1, 1, 2), q, pi, QQ).base_value(), Rational(8));
  EXPECT_THROW(KirillovVector(3, {CosetMass{1, 1, 0, 1}, CosetMass{4, 2, 0, 1}}), DomainError);
}

TEST(Zeta, Linear) {
  std::mt19937_64 rng(13);
  const auto pi = SatakeData::principal(MultChar::unramified(5, 3), MultChar(UnitCharacter::quadratic(5), 2));
  for (int t = 0; t < 20; ++t) {
    const MultChar chi(random_unit(rng, 5, 0, 2), random_pi(rng));
    const auto a = random_pi(rng), b = random_pi(rng);
    const auto f = KirillovVector::indicator(5, 2, 1, 0, a);
    const auto g = KirillovVector::indicator(5, 3, 2, 1, b);
    const KirillovVector fg(5, {f.cosets()[0], g.cosets()[0]});
    EXPECT_EQ(zeta<Rational>(fg, chi, pi, QQ), zeta<Rational>(f, chi, pi, QQ) + zeta<Rational>(g, chi, pi, QQ));
  }
}

TEST(LocalPeriodSplit, Examples) {
  const auto m1 = MultChar::unramified(3, Rational(2)), m2 = MultChar::unramified(3, Rational(5));
  const auto pi = SatakeData::principal(m1, m2);
  const auto cb = MultChar::unramified(3, Rational(1));
  const auto cc = (pi.central() * cb).inverse();
  const auto f = KirillovVector::indicator(3, 1, 0);
  const auto zp = zeta<Rational>(f, cb, pi, QQ).base_value();
  EXPECT_EQ(zp, Rational(4));
  const auto zm = zeta<Rational>(f, cb.inverse(), pi, QQ).base_value();
  const auto v = local_period_split<Rational>(f, f, cb, cc, pi, QQ);
  const auto ninv = Rational(4, 3) * adjoint_l<Rational>(pi, Rational(1, 3), QQ);
  EXPECT_EQ(v.base_value(), ninv * zp * zm);
  // f+ against a ramified chi with no matching coset.
  const auto rb = MultChar(UnitCharacter::quadratic(3), 1);
  EXPECT_TRUE(local_period_split<Rational>(f, f, rb, (pi.central() * rb).inverse(), pi, QQ).is_zero());
  EXPECT_EQ(local_period_split<Rational>(f.scaled(3), f, cb, cc, pi, QQ), v * Rational(3));
  EXPECT_THROW(local_period_split<Rational>(f, f, cb, cb, pi, QQ), DomainError);
  EXPECT_THROW(local_period_split<Rational>(f, f, cb, cc, SatakeData::principal(m1, m1.twist(3)), QQ), DomainError);
}

TEST(LocalPeriodSplit, Bilinear) {
  std::mt19937_64 rng(17);
  const auto pi = SatakeData::principal(MultChar(UnitCharacter::quadratic(5), 2), MultChar::unramified(5, 3));
  for (int t = 0; t < 15; ++t) {
    const MultChar cb(random_unit(rng, 5, 0, 2), random_pi(rng));
    const auto cc = (pi.central() * cb).inverse();
    const auto f1 = KirillovVector::indicator(5, 1 + std::uniform_int_distribution<int>(1, 3)(rng), 1, 0, random_pi(rng));
    const auto f2 = KirillovVector::indicator(5, 1, 2, 1, random_pi(rng));
    const KirillovVector f12(5, {f1.cosets()[0], f2.cosets()[0]});
    const auto g = KirillovVector::indicator(5, 2, 2, -1, random_pi(rng));
    EXPECT_EQ(local_period_split<Rational>(f12, g, cb, cc, pi, QQ),
              widen_add(local_period_split<Rational>(f1, g, cb, cc, pi, QQ), local_period_split<Rational>(f2, g, cb, cc, pi, QQ)));
    EXPECT_EQ(local_period_split<Rational>(g, f12, cb, cc, pi, QQ),
              widen_add(local_period_split<Rational>(g, f1, cb, cc, pi, QQ), local_period_split<Rational>(g, f2, cb, cc, pi, QQ)));
  }
}

TEST(LocalPeriodCompact, Examples) {
  const TorusCharacter c0{6, 1};
  const TorusCharacter inv{6, 5};
  EXPECT_EQ(local_period_compact({ToricCoefficient::Torus::inert, {{1, c0}}}, inv), Rational(1));
  EXPECT_EQ(local_period_compact({ToricCoefficient::Torus::ramified, {{1, c0}}}, inv), Rational(2));
  EXPECT_EQ(local_period_compact({ToricCoefficient::Torus::inert, {{3, TorusCharacter{6, 2}}, {4, TorusCharacter{6, 3}}}}, inv), Rational(0));
  EXPECT_EQ(local_period_compact({ToricCoefficient::Torus::inert, {{3, TorusCharacter{6, 2}}, {4, c0}}}, inv), Rational(4));
}

TEST(QDistribution, Examples) {
  const auto f = KirillovVector::indicator(3, 1, 1);
  EXPECT_EQ(unit_integral(f), Rational(1, 2));
  const auto pi = SatakeData::principal(MultChar::unramified(3, 2), MultChar::unramified(3, 5));
  const PsiSystem psi{3, 3};
  const StablePair pair{f, f};
  const auto chi = MultChar(UnitCharacter::quadratic(3), Rational(7));
  const auto q = q_distribution_eval<Rational>(pair, pair, 1, chi, pi, psi, QQ);
  EXPECT_EQ(q, embed_cyclotomic(cyclotomic_ring_of_order<Rational>(1, QQ).from_rational(q_distribution_closed(pair, pair, pi)), q.context()));
  const StablePair zero{KirillovVector(3), KirillovVector(3)};
  EXPECT_TRUE(q_distribution_eval<Rational>(zero, pair, 1, chi, pi, psi, QQ).is_zero());
  EXPECT_THROW(q_distribution_eval<Rational>(StablePair{KirillovVector::indicator(3, 2, 1), f}, pair, 1, chi, pi, psi, QQ), AdmissibilityError);
  EXPECT_THROW(q_distribution_eval<Rational>(pair, pair, 1, MultChar(UnitCharacter::all(3, 2)[1], 1), pi, psi, QQ), AdmissibilityError);
}

TEST(QDistribution, DepthInvariance) {
  std::mt19937_64 rng(29);
  for (unsigned long p : {2UL, 3UL, 5UL})
    for (int n = 1; n <= 2; ++n) {
      const PsiSystem psi{p, 3};
      const auto ln = ipow(p, n);
      auto pair_at = [&](std::uint64_t r1, std::uint64_t r2) {
        const auto rep = [&](std::uint64_t r) { return 1 + ln * r; };
        std::vector<CosetMass> a{{rep(r1), n + 1, 0, random_pi(rng)}}, b{{rep(r2), n + 1, 0, random_pi(rng)}};
        return StablePair{KirillovVector(p, a), KirillovVector(p, b)};
      };
      const auto plus = pair_at(0, 1), minus = pair_at(1, 0);
      auto draw = [&] { return SatakeData::principal(MultChar(random_unit(rng, p, 0, n), random_pi(rng)), MultChar::unramified(p, random_pi(rng))); };
      auto pi = draw();
      while (true) {
        try {
          adjoint_l<Rational>(pi, Rational(1, static_cast<long long>(p)), QQ);
          break;
        } catch (const PoleError&) {
          pi = draw();
        }
      }
      std::optional<Cyclotomic> first;
      for (int t = 0; t < 10; ++t) {
        const MultChar chi(random_unit(rng, p, 0, n), random_pi(rng));
        std::optional<Cyclotomic> q;
        try {
          q = q_distribution_eval<Rational>(plus, minus, n, chi, pi, psi, QQ);
        } catch (const PoleError&) {
          continue;
        }
        ASSERT_TRUE(q->in_base());
        if (!first) first = q;
        EXPECT_EQ(q->base_value(), first->base_value()) << chi.str();
      }
      ASSERT_TRUE(first.has_value());
      EXPECT_EQ(first->base_value(), q_distribution_closed(plus, minus, pi));
    }
}

TEST(SaitoTunnell, Examples) {
  const PsiSystem psi{3, 2};
  const auto un = [](Rational v) { return MultChar::unramified(3, std::move(v)); };
  const auto inert_eta = un(-1);
  // Unramified principal series at an inert place.
  auto r = saito_tunnell_sign(SatakeData::principal(un(2), un(5)), PlaceCharacter::inert(Rational(1, 10)), inert_eta, psi);
  EXPECT_EQ(r.epsilon, 1);
  EXPECT_EQ(r.hasse, 1);
  EXPECT_EQ(required_hasse(1, -1, 1), -1);
  // Steinberg at an inert place: the quaternion algebra ramifies.
  r = saito_tunnell_sign(SatakeData::special(un(2)), PlaceCharacter::inert(Rational(1, 4)), inert_eta, psi);
  EXPECT_EQ(r.epsilon, -1);
  EXPECT_EQ(r.hasse, -1);
  // One ramified quadratic parameter: eps = tau^2 / 3 = -1.
  const auto q = MultChar(UnitCharacter::quadratic(3), 1);
  const auto pi = SatakeData::principal(q, un(2));
  const auto cb = un(1);
  const auto cc = (pi.central() * cb).inverse();
  r = saito_tunnell_sign(pi, PlaceCharacter::split(cb, cc), un(1), psi);
  EXPECT_EQ(r.product, r.product.context().from_int(-3));
  EXPECT_EQ(r.epsilon, -1);
  EXPECT_EQ(r.chi_minus_one, -1);
  EXPECT_EQ(r.hasse, 1);
  EXPECT_THROW(saito_tunnell_sign(SatakeData::supercuspidal({}), PlaceCharacter::split(cb, cc), un(1), psi), MissingDataError);
  EXPECT_EQ(saito_tunnell_sign(SatakeData::supercuspidal({}, -1), PlaceCharacter::inert(1), inert_eta, psi).hasse, -1);
  EXPECT_THROW(saito_tunnell_sign(pi, PlaceCharacter::split(cb, cb), un(1), psi), DomainError);
}

TEST(SaitoTunnell, BruteForceEpsilonProducts) {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 50; ++t) {
    const unsigned long p = t % 2 ? 3 : 5;
    const PsiSystem psi{p, 2};
    const MultChar m1(random_unit(rng, p, 0, 2), random_pi(rng)), m2(random_unit(rng, p, 0, 2), random_pi(rng));
    const auto pi = SatakeData::principal(m1, m2);
    const MultChar cb(random_unit(rng, p, 0, 2), random_pi(rng));
    const auto cc = (pi.central() * cb).inverse();
    const auto r = saito_tunnell_sign(pi, PlaceCharacter::split(cb, cc), MultChar::unramified(p, 1), psi);
    Cyclotomic prod = cyclotomic_ring_of_order<Rational>(1, QQ).one();
    int cond = 0;
    for (const auto& a : {m1 * cb, m2 * cb, m1 * cc, m2 * cc}) {
      prod = widen_mul(prod, brute_epsilon(a, psi));
      cond += a.conductor();
    }
    EXPECT_EQ(widen_add(prod, -r.product).is_zero(), true);
    EXPECT_EQ(cond, r.conductor);
    const auto s = prod * inverse(pow(Rational(static_cast<long long>(p)), static_cast<unsigned long long>(cond / 2)));
    ASSERT_TRUE(s.in_base());
    EXPECT_EQ(s.base_value(), Rational(r.epsilon));
    EXPECT_EQ(r.epsilon * r.chi_minus_one * r.eta_minus_one, r.hasse);
  }
}
