#include "ltk/cli.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "ltk/coleman.hpp"
#include "ltk/global_toy.hpp"
#include "ltk/wald_local.hpp"

namespace ltk::cli {

using json = nlohmann::json;

namespace {

struct Checks {
  json list = json::array();
  void add(const std::string& name, bool pass) { list.push_back({{"name", name}, {"pass", pass}}); }
  bool all() const {
    return std::all_of(list.begin(), list.end(), [](const json& c) { return c.at("pass").get<bool>(); });
  }
};

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  return j.at(key);
}

long long integer(const json& j, const char* what) {
  if (!j.is_number_integer()) throw SchemaError(std::string(what) + " must be an integer");
  return j.get<long long>();
}

long long integer_or(const json& j, const char* key, long long def) { return j.contains(key) ? integer(j.at(key), key) : def; }

std::uint64_t prime_field(const json& j, const char* key) {
  const auto v = integer(need(j, key), key);
  if (v < 2 || !is_prime(static_cast<std::uint64_t>(v))) throw SchemaError(std::string(key) + " must be a prime");
  return static_cast<std::uint64_t>(v);
}

Rational rat(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  throw SchemaError("expected a rational as a string \"a/b\" or an integer, got " + j.dump());
}

long long key_int(const std::string& s) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw SchemaError("expected an integer key, got '" + s + "'");
  return v;
}

// {"e": coef, ...} or [[e, coef], ...].
std::map<long long, Rational> sparse(const json& j) {
  std::map<long long, Rational> out;
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) out[key_int(k)] += rat(v);
  } else if (j.is_array()) {
    for (const auto& e : j) {
      if (!e.is_array() || e.size() != 2) throw SchemaError("sparse entries must be [exponent, coefficient]");
      out[integer(e[0], "exponent")] += rat(e[1]);
    }
  } else {
    throw SchemaError("expected an object {exponent: coefficient}");
  }
  return out;
}

json val(const Rational& x) { return x.str(); }
json val(const PadicInt& x) { return x.str(); }
template <CoeffRing R>
json val(const QuotientElem<R>& x) {
  if (x.in_base()) return val(x[0]);
  json c = json::array();
  for (const auto& a : x.coefficients()) c.push_back(val(a));
  return {{"root_order", x.context().root_order()}, {"coefficients", c}};
}
template <CoeffRing R>
json series_json(const TruncatedSeries<R>& s) {
  json out = json::array();
  for (int i = 0; i <= s.trunc(); ++i) out.push_back(val(s.coeff(i)));
  return out;
}
template <CoeffRing R>
json laurent_json(const LaurentPoly<R>& f) {
  json out = json::object();
  for (const auto& [e, a] : f.terms()) out[std::to_string(e)] = val(a);
  return out;
}

UnitCharacter unit_char(const json& j, std::uint64_t l_default) {
  if (!j.is_object()) throw SchemaError("a character must be an object");
  const auto l = j.contains("l") ? prime_field(j, "l") : l_default;
  if (l != l_default) throw SchemaError("character prime " + std::to_string(l) + " differs from " + std::to_string(l_default));
  const int level = static_cast<int>(integer_or(j, "level", 0));
  if (j.value("quadratic", false)) return UnitCharacter::quadratic(l);
  if (j.contains("teichmuller")) return UnitCharacter::teichmuller_power(l, std::max(level, 1), integer(j.at("teichmuller"), "teichmuller"));
  if (j.contains("exps")) {
    std::vector<std::uint64_t> e;
    for (const auto& x : j.at("exps")) {
      const auto v = integer(x, "exps entry");
      if (v < 0) throw SchemaError("character exponents must be >= 0");
      e.push_back(static_cast<std::uint64_t>(v));
    }
    return UnitCharacter(l, level, std::move(e));
  }
  return UnitCharacter::trivial(l, level);
}

MultChar mult_char(const json& j, std::uint64_t l) {
  return MultChar(unit_char(j, l), j.contains("pi") ? rat(j.at("pi")) : Rational(1));
}

SatakeData representation(const json& j, std::uint64_t l) {
  const auto kind = need(j, "kind").get<std::string>();
  if (kind == "principal") {
    const auto& mu = need(j, "mu");
    if (!mu.is_array() || mu.size() != 2) throw SchemaError("principal series needs mu = [mu1, mu2]");
    return SatakeData::principal(mult_char(mu[0], l), mult_char(mu[1], l));
  }
  if (kind == "special") {
    const auto& mu = need(j, "mu");
    return SatakeData::special(mult_char(mu.is_array() ? mu.at(0) : mu, l));
  }
  if (kind == "supercuspidal") {
    std::optional<int> eps;
    if (j.contains("epsilon_sign")) eps = static_cast<int>(integer(j.at("epsilon_sign"), "epsilon_sign"));
    auto pi = SatakeData::supercuspidal({}, eps);
    pi.mu = {MultChar::unramified(l, Rational(1))};
    return pi;
  }
  throw SchemaError("unknown representation kind '" + kind + "'");
}

KirillovVector kirillov(const json& j, std::uint64_t l) {
  std::vector<CosetMass> cs;
  for (const auto& c : j.value("cosets", json::array())) {
    const auto rep = integer_or(c, "rep", 1);
    if (rep < 0) throw SchemaError("coset representative must be >= 0");
    cs.push_back(CosetMass{static_cast<std::uint64_t>(rep), static_cast<int>(integer_or(c, "depth", 0)),
                           static_cast<int>(integer_or(c, "vpi", 0)), c.contains("value") ? rat(c.at("value")) : Rational(1)});
  }
  std::optional<KirillovTail> tail;
  if (j.contains("tail")) {
    const auto& t = j.at("tail");
    const auto kind = need(t, "kind").get<std::string>();
    if (kind != "sharp" && kind != "log") throw SchemaError("tail kind must be 'sharp' or 'log'");
    tail = KirillovTail{kind == "sharp" ? KirillovTail::Kind::sharp : KirillovTail::Kind::log, mult_char(need(t, "mu"), l)};
  }
  return KirillovVector(l, std::move(cs), std::move(tail));
}

int degree_hint(const json& j) {
  if (j.contains("dirac")) {
    long long top = 0;
    for (const auto& [u, m] : sparse(j.at("dirac"))) {
      (void)m;
      top = std::max(top, u);
    }
    return static_cast<int>(top);
  }
  if (j.contains("series")) return static_cast<int>(j.at("series").size()) - 1;
  throw SchemaError("a disc function needs 'dirac' or 'series'");
}

// {"dirac": {u: mass}} for sum mass (1+S)^u, or {"series": [c0, c1, ...]}.
DiscFunction<Rational> disc(const json& j, int D) {
  const RationalField QQ;
  if (j.contains("dirac")) {
    std::vector<Rational> m(static_cast<std::size_t>(D) + 1, Rational(0));
    for (const auto& [u, x] : sparse(j.at("dirac"))) {
      if (u < 0 || u > D) throw SchemaError("Dirac exponent " + std::to_string(u) + " outside [0, D]");
      m[static_cast<std::size_t>(u)] += x;
    }
    return from_q_basis<Rational>(QQ, m, D);
  }
  std::vector<Rational> c;
  for (const auto& x : need(j, "series")) c.push_back(rat(x));
  if (static_cast<int>(c.size()) > D + 1) throw SchemaError("series longer than D + 1");
  return TruncatedSeries<Rational>(QQ, std::move(c), D);
}

template <class F>
json with_base(const RunConfig& cfg, std::uint64_t p, F&& f) {
  if (cfg.mode == Mode::rational) return f(RationalField{});
  return f(PadicRing(static_cast<unsigned long>(p), cfg.precision));
}

template <class Base>
auto lift(const Base& base, const DiscFunction<Rational>& phi) {
  return phi.map([&](const Rational& q) { return base.from_rational(q); }, base);
}

template <class Base>
auto group_for(const Base& base, unsigned long p, int D) {
  if constexpr (std::is_same_v<Base, RationalField>) {
    (void)base;
    return multiplicative_group(p, D);
  } else {
    return reduce_group(multiplicative_group(p, D), base);
  }
}

template <CoeffRing R>
bool same(const QuotientElem<R>& a, const QuotientElem<R>& b) {
  return widen_add(a, -b).is_zero();
}

// --- lt ---------------------------------------------------------------

json cmd_lt(const RunConfig& cfg, const json& in, Checks& checks) {
  const auto p = prime_field(in, "p");
  const Rational pi = in.contains("pi") ? rat(in.at("pi")) : Rational(static_cast<long long>(p));
  const auto q = static_cast<unsigned long>(integer_or(in, "q_res", static_cast<long long>(p)));
  std::vector<Rational> f;
  if (in.contains("frobenius")) {
    for (const auto& c : in.at("frobenius")) f.push_back(rat(c));
  } else {
    f = detail::multiplicative_frobenius(p);
  }
  const int D = cfg.trunc.value_or(static_cast<int>(integer_or(in, "D", 8)));
  const auto F = lt_construct(p, pi, q, f, D);
  const auto& law = F.law();
  const RationalField QQ;

  bool unit = true;
  for (int i = 0; i <= D; ++i) {
    const Rational e(i == 1 ? 1 : 0);
    unit = unit && law.at(i, 0) == e && law.at(0, i) == e;
  }
  checks.add("identity", unit);
  checks.add("commutativity", law.swapped() == law);
  const auto lam = lt_log(F);
  using Biv = BivariateSeries<Rational>;
  checks.add("log_additive", compose_bivariate(lam, law) == Biv::in_x(lam, D) + Biv::in_y(lam, D));
  const auto ex = lt_exp(F);
  checks.add("exp_inverts_log", series_compose(lam, ex) == TruncatedSeries<Rational>::variable(QQ, D));

  auto out_val = [&](const Rational& x) -> json {
    if (cfg.mode == Mode::rational) return val(x);
    return val(PadicRing(p, cfg.precision).from_rational(x));
  };
  json law_json = json::array();
  for (int i = 0; i <= D; ++i) {
    json row = json::array();
    for (int j = 0; i + j <= D; ++j) row.push_back(out_val(law.at(i, j)));
    law_json.push_back(row);
  }
  json out = {{"D", D}, {"law", law_json}};
  if (cfg.mode == Mode::rational) {
    out["log"] = series_json(lam);
    out["exp"] = series_json(ex);
  }
  json endos = json::object();
  for (const auto& a : in.value("endo", json::array())) {
    const auto ra = rat(a);
    const auto g = lt_endo(F, ra);
    checks.add("endo_homomorphism[" + ra.str() + "]", g[1] == ra && compose_bivariate(g, law) == substitute_bivariate(law, g, g));
    json s = json::array();
    for (int i = 0; i <= g.trunc(); ++i) s.push_back(out_val(g[static_cast<std::size_t>(i)]));
    endos[ra.str()] = s;
  }
  out["endo"] = endos;
  if (in.contains("torsion_level")) {
    const int m = static_cast<int>(integer(in.at("torsion_level"), "torsion_level"));
    const auto T = torsion_ring(F, m);
    checks.add("torsion_point_order", T.frobenius_iterate(m).is_zero() && !T.frobenius_iterate(m - 1).is_zero());
    json mod = json::array();
    for (const auto& c : T.ring.modulus()) mod.push_back(out_val(c));
    out["torsion"] = {{"level", m}, {"modulus", mod}};
  }
  return out;
}

// --- mellin -----------------------------------------------------------

json cmd_mellin(const RunConfig& cfg, const json& in, Checks& checks) {
  const auto p = prime_field(in, "p");
  const auto chi = unit_char(in.value("character", json::object()), p);
  const int k = static_cast<int>(integer_or(in, "k", 0));
  if (k < 0) throw SchemaError("k must be >= 0");
  const auto& phi_in = need(in, "phi");
  const int D = cfg.trunc.value_or(static_cast<int>(integer_or(in, "D", degree_hint(phi_in) + k)));
  const auto phi = disc(phi_in, D);
  if (phi.degree() > D - k) throw DomainError("phi has degree above D - k; raise D");
  const PsiSystem psi{static_cast<unsigned long>(p), static_cast<int>(integer_or(in, "psi_level", std::max(chi.level(), 1)))};
  return with_base(cfg, p, [&](const auto& base) {
    const auto F = group_for(base, static_cast<unsigned long>(p), std::max(D, 3));
    const auto ph = lift(base, phi);
    const auto m = mellin_at_character(F, ph, chi, k, psi);
    checks.add("measure_route", m == mellin_measure_route(F, ph, chi, k));
    if (chi.is_trivial()) checks.add("weight_routes", descend(m) == mellin_at_weight(F, ph, k));
    json masses = json::object();
    const auto q = to_q_basis(m);
    for (std::size_t u = 0; u < q.size(); ++u)
      if (!q[u].is_zero()) masses[std::to_string(u)] = val(q[u]);
    return json{{"D", D}, {"series", series_json(m)}, {"dirac", masses}, {"stable", is_stable(F, ph).stable}, {"character", chi.str()}};
  });
}

// --- factors ----------------------------------------------------------

json cmd_factors(const RunConfig& cfg, const json& in, Checks& checks) {
  const auto l = prime_field(in, "l");
  const auto chi = mult_char(need(in, "chi"), l);
  const PsiSystem psi{static_cast<unsigned long>(l), static_cast<int>(integer_or(in, "psi_level", std::max(chi.conductor(), 1)))};
  return with_base(cfg, l, [&](const auto& base) {
    using R = std::decay_t<decltype(base.one())>;
    json out = {{"conductor", chi.conductor()}, {"sign", chi.sign()}};
    if (chi.is_unramified()) {
      if (!(chi.pi_value() == Rational(1))) out["L"] = val(l_factor<R>(chi, base));
    } else {
      out["L"] = val(base.one());
      const auto tau = gauss_sum<R>(chi, psi, base);
      const auto tau_inv = gauss_sum<R>(chi.inverse(), psi, base);
      out["gauss_sum"] = val(tau);
      const auto n = static_cast<unsigned long long>(chi.conductor());
      const auto rhs = tau.context().from_int(chi.sign()) * base.from_int(static_cast<long long>(ipow(l, static_cast<unsigned>(n))));
      checks.add("gauss_norm_relation", tau * tau_inv == rhs);
    }
    const auto eps = epsilon_abelian<R>(chi, psi, base);
    out["epsilon"] = val(eps);
    const auto mu = MultChar::unramified(l, Rational(2));
    const auto twisted = epsilon_abelian<R>(chi * mu, psi, base);
    checks.add("epsilon_unramified_twist",
               same(twisted, eps * base.from_rational(Rational(pow(Rational(2), static_cast<unsigned long long>(chi.conductor()))))));
    if (in.contains("pi_rep")) {
      const auto pi = representation(in.at("pi_rep"), l);
      out["conductor_rep"] = conductor_rep(pi, chi);
      out["epsilon_rep"] = val(epsilon_rep<R>(pi, chi, psi, base));
      out["L_inverse_rep"] = val(l_function_inverse<R>(pi, chi, base));
      const Rational x = in.contains("x") ? rat(in.at("x")) : Rational(1, static_cast<long long>(l));
      out["adjoint_L"] = val(adjoint_l<R>(pi, x, base));
    }
    return out;
  });
}

// --- zeta -------------------------------------------------------------

json cmd_zeta(const RunConfig& cfg, const json& in, Checks& checks) {
  const auto l = prime_field(in, "l");
  const auto f = kirillov(need(in, "f"), l);
  const auto chi = mult_char(need(in, "chi"), l);
  const auto pi = representation(need(in, "pi_rep"), l);
  return with_base(cfg, l, [&](const auto& base) {
    using R = std::decay_t<decltype(base.one())>;
    const auto z = zeta<R>(f, chi, pi, base);
    auto parts = trivial_cyclotomic<R>(base).zero();
    for (const auto& c : f.cosets()) parts = widen_add(parts, zeta<R>(KirillovVector(l, {c}), chi, pi, base));
    if (f.tail()) parts = widen_add(parts, zeta<R>(KirillovVector(l, {}, f.tail()), chi, pi, base));
    checks.add("linearity", same(z, parts));
    return json{{"zeta", val(z)}};
  });
}

// --- period -----------------------------------------------------------

std::vector<std::uint64_t> uint_list(const json& j, const char* what) {
  std::vector<std::uint64_t> out;
  if (!j.is_array()) throw SchemaError(std::string(what) + " must be an array");
  for (const auto& x : j) {
    const auto v = integer(x, what);
    if (v < 0) throw SchemaError(std::string(what) + " entries must be >= 0");
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

json cmd_period_universal(const RunConfig& cfg, const json& in, Checks& checks) {
  const auto p = prime_field(in, "p");
  const TameGroup C(uint_list(in.value("tame", json::array()), "tame"));
  const auto& pts_in = need(in, "points");
  int hint = 0;
  for (const auto& y : pts_in) hint = std::max(hint, degree_hint(need(y, "phi")));
  int kmax = 0;
  for (const auto& c : need(in, "characters")) kmax = std::max<int>(kmax, static_cast<int>(integer_or(c, "k", 0)));
  const int D = cfg.trunc.value_or(static_cast<int>(integer_or(in, "D", hint + kmax)));
  std::vector<std::pair<std::string, TameGroup::Element>> labels;
  std::vector<DiscFunction<Rational>> phis;
  for (const auto& y : pts_in) {
    labels.emplace_back(need(y, "id").get<std::string>(), uint_list(need(y, "c"), "c"));
    phis.push_back(disc(need(y, "phi"), D));
  }
  std::vector<ToyCharacter> chars;
  for (const auto& c : in.at("characters"))
    chars.push_back(ToyCharacter{uint_list(c.value("tame", json::array()), "tame"), unit_char(c.value("chi_p", json::object()), p),
                                 static_cast<int>(integer_or(c, "k", 0))});
  int level = 1;
  for (const auto& c : chars) level = std::max(level, c.chi_p.level());
  const PsiSystem psi{static_cast<unsigned long>(p), static_cast<int>(integer_or(in, "psi_level", level))};

  return with_base(cfg, p, [&](const auto& base) {
    using R = std::decay_t<decltype(base.one())>;
    std::vector<CMPoint<R>> pts;
    for (std::size_t i = 0; i < phis.size(); ++i) pts.push_back({labels[i].first, labels[i].second, lift(base, phis[i])});
    const CMCosetModel<R> model(group_for(base, static_cast<unsigned long>(p), std::max(D, 3)), C, pts);
    json values = json::array();
    bool brute_ok = true, w0_ok = true, any_w0 = false;
    for (const auto& c : chars) {
      const auto v = universal_period_eval(model, c, psi);
      values.push_back({{"tame", c.tame}, {"chi_p", c.chi_p.str()}, {"k", c.k}, {"value", val(v)}});
      // |Y|^{-1} sum_y sum_u xi(c_y) chi_p(u) u^k m_{y,u}.
      const auto ring = cyclotomic_ring_of_order<R>(lcm_u(C.exponent(), c.chi_p.order()), base);
      auto s = ring.zero();
      for (std::size_t y = 0; y < pts.size(); ++y) {
        const auto m = to_q_basis(pts[y].phi);
        for (std::size_t u = 0; u < m.size(); ++u)
          if (!m[u].is_zero())
            s += C.character_value(c.tame, pts[y].c, ring) * c.chi_p.value(static_cast<long long>(u), ring) *
                 (m[u] * pow(base.from_int(static_cast<long long>(u)), static_cast<unsigned long long>(c.k)));
      }
      s = s * inverse(base.from_int(static_cast<long long>(pts.size())));
      brute_ok = brute_ok && same(v, s);
      if (c.k == 0 && cfg.mode == Mode::rational) {
        any_w0 = true;
        w0_ok = w0_ok && weight0_waldspurger_check(model, c, psi).agree;
      }
    }
    checks.add("brute_double_sum", brute_ok);
    if (any_w0) checks.add("weight0_waldspurger", w0_ok);
    return json{{"D", D}, {"values", values}};
  });
}

json cmd_period_split(const RunConfig& cfg, const json& in, Checks&) {
  const auto l = prime_field(in, "l");
  const auto fp = kirillov(need(in, "f_plus"), l);
  const auto fm = kirillov(need(in, "f_minus"), l);
  const auto chi_b = mult_char(need(in, "chi_b"), l);
  const auto chi_c = mult_char(need(in, "chi_c"), l);
  const auto pi = representation(need(in, "pi_rep"), l);
  return with_base(cfg, l, [&](const auto& base) {
    using R = std::decay_t<decltype(base.one())>;
    return json{{"period", val(local_period_split<R>(fp, fm, chi_b, chi_c, pi, base))}};
  });
}

json cmd_period(const RunConfig& cfg, const json& in, Checks& checks) {
  const auto kind = in.value("kind", std::string("universal"));
  if (kind == "universal") return cmd_period_universal(cfg, in, checks);
  if (kind == "split") return cmd_period_split(cfg, in, checks);
  throw SchemaError("period kind must be 'universal' or 'split'");
}

// --- ratio ------------------------------------------------------------

template <class Base>
auto cyclo_value(const json& j, const Base& base) {
  using R = std::decay_t<decltype(base.one())>;
  if (j.is_object()) {
    const auto M = integer(need(j, "root_order"), "root_order");
    if (M < 1) throw SchemaError("root_order must be >= 1");
    const auto ring = cyclotomic_ring_of_order<R>(static_cast<std::uint64_t>(M), base);
    std::vector<R> c;
    for (const auto& x : need(j, "coefficients")) c.push_back(base.from_rational(rat(x)));
    return ring.from_coefficients(std::move(c));
  }
  return trivial_cyclotomic<R>(base).from_rational(rat(j));
}

json cmd_ratio(const RunConfig& cfg, const json& in, Checks&) {
  const std::uint64_t p = cfg.mode == Mode::padic ? prime_field(in, "p") : 2;
  return with_base(cfg, p, [&](const auto& base) {
    const auto r = toy_l_ratio_eval(cyclo_value(need(in, "p_plus"), base), cyclo_value(need(in, "p_minus"), base), cyclo_value(need(in, "q"), base));
    return json{{"ratio", val(r)}};
  });
}

// --- coleman ----------------------------------------------------------

json cmd_coleman(const RunConfig& cfg, const json& in, Checks& checks) {
  const auto q = integer(need(in, "q"), "q");
  std::vector<Rational> P;
  if (in.contains("P")) {
    for (const auto& c : in.at("P")) P.push_back(rat(c));
  } else {
    P = {Rational(-q), Rational(1)};
  }
  const FrobeniusSpec spec(q, P);
  const std::uint64_t p = cfg.mode == Mode::padic ? prime_field(in, "p") : 2;
  return with_base(cfg, p, [&](const auto& base) {
    using R = std::decay_t<decltype(base.one())>;
    auto laurent = [&](const json& j) {
      std::map<long long, R> t;
      for (const auto& [e, a] : sparse(j)) t.emplace(e, base.from_rational(a));
      return LaurentPoly<R>(base, t);
    };
    std::optional<TorusDifferential<R>> w;
    if (in.contains("differential")) {
      const auto& d = in.at("differential");
      w.emplace(base.from_rational(rat(need(d, "residue"))), laurent(d.value("exact", json::object())));
    } else if (in.contains("residue")) {
      w = TorusDifferential<R>::from_form(base.from_rational(rat(in.at("residue"))), laurent(need(in, "form")));
    } else {
      w = TorusDifferential<R>::from_form(laurent(need(in, "form")));
    }
    json out = {{"differential", {{"residue", val(w->residue())}, {"exact", laurent_json(w->exact())}}}};
    const auto rep = is_frobenius_proper(*w, spec);
    out["proper"] = rep.proper;
    if (!rep.proper) return out;
    out["witness"] = laurent_json(*rep.witness);
    const auto F = coleman_primitive(*w, spec);
    checks.add("d_primitive_is_omega", F.d() == *w);
    checks.add("no_log_after_P", !apply_p(F, spec).has_log());
    out["primitive"] = {{"log", val(F.log_coef)}, {"laurent", laurent_json(F.g)}};
    return out;
  });
}

// --- selftest ---------------------------------------------------------

struct SelfCase {
  std::string name;
  std::string subcommand;
  json input;
  std::string pointer;  // JSON pointer into outputs, checked against expect
  json expect;
};

std::vector<SelfCase> self_cases() {
  auto c = [](std::string name, std::string sub, const char* in, std::string ptr, const char* expect) {
    return SelfCase{std::move(name), std::move(sub), json::parse(in), std::move(ptr), json::parse(expect)};
  };
  return {
      c("lt.multiplicative_p2", "lt", R"({"p": 2, "D": 3})", "/law/1/1", R"("1")"),
      c("lt.solved_p3_cubic", "lt", R"({"p": 3, "frobenius": [0, 3, 0, 1], "D": 3})", "/law/2/1", R"("1/8")"),
      c("lt.endo_half", "lt", R"({"p": 3, "D": 3, "endo": ["1/2"]})", "/endo/1~12/2", R"("-1/8")"),
      c("mellin.dirac_quadratic", "mellin", R"({"p": 3, "phi": {"dirac": {"4": "1"}}, "character": {"quadratic": true}, "k": 1, "D": 5})",
        "/dirac/4", R"("4")"),
      c("factors.quadratic_conductor", "factors", R"({"l": 5, "chi": {"quadratic": true}})", "/conductor", "1"),
      c("factors.unramified_L", "factors", R"({"l": 5, "chi": {"pi": "1/5"}})", "/L", R"("5/4")"),
      c("period.universal", "period",
        R"({"p": 3, "tame": [2], "points": [{"id": "y0", "c": [0], "phi": {"dirac": {"1": "1"}}},
            {"id": "y1", "c": [1], "phi": {"dirac": {"2": "1"}}}], "characters": [{"tame": [1], "k": 2}]})",
        "/values/0/value", R"("-3/2")"),
      c("ratio.basic", "ratio", R"({"p_plus": "-3/2", "p_minus": "-3/2", "q": "1/2"})", "/ratio", R"("9/2")"),
      c("coleman.mixed", "coleman", R"({"q": 3, "form": {"2": "3", "-1": "1"}})", "/primitive/log", R"("1")"),
      c("coleman.dlog", "coleman", R"({"q": 5, "differential": {"residue": "1"}})", "/witness", "{}"),
  };
}

json cmd_selftest(const RunConfig& cfg, const json&, Checks& checks) {
  json out = json::object();
  for (const auto& c : self_cases()) {
    RunConfig sub{c.subcommand, c.input, Mode::rational, cfg.precision, std::nullopt, 1};
    const auto r = run(sub);
    bool ok = r.exit_code == 0;
    if (ok) {
      const auto& o = r.report.at("outputs");
      const json::json_pointer ptr(c.pointer);
      ok = o.contains(ptr) && o.at(ptr) == c.expect;
      out[c.name] = o.contains(ptr) ? o.at(ptr) : json(nullptr);
    } else {
      out[c.name] = r.report.value("error", json(nullptr));
    }
    checks.add(c.name, ok);
    if (r.report.contains("checks"))
      for (const auto& k : r.report.at("checks")) checks.add(c.name + "/" + k.at("name").get<std::string>(), k.at("pass").get<bool>());
  }
  return out;
}

using Handler = json (*)(const RunConfig&, const json&, Checks&);

Handler handler_for(const std::string& name) {
  static const std::map<std::string, Handler> table = {
      {"lt", cmd_lt},       {"mellin", cmd_mellin},   {"factors", cmd_factors}, {"zeta", cmd_zeta},
      {"period", cmd_period}, {"ratio", cmd_ratio}, {"coleman", cmd_coleman}, {"selftest", cmd_selftest},
  };
  const auto it = table.find(name);
  if (it == table.end()) throw SchemaError("unknown subcommand '" + name + "'");
  return it->second;
}

struct ItemResult {
  int code = 0;
  json outputs;
  json checks = json::array();
  json error;
};

ItemResult run_item(const RunConfig& cfg, Handler h, const json& in) {
  ItemResult r;
  try {
    if (!in.is_object()) throw SchemaError("input must be a JSON object");
    Checks checks;
    r.outputs = h(cfg, in, checks);
    r.checks = checks.list;
    r.code = checks.all() ? 0 : 3;
  } catch (const ConsistencyError& e) {
    r.code = 3;
    r.error = {{"kind", e.kind()}, {"message", e.what()}};
  } catch (const Error& e) {
    r.code = 2;
    r.error = {{"kind", e.kind()}, {"message", e.what()}};
  } catch (const json::exception& e) {
    r.code = 2;
    r.error = {{"kind", "schema"}, {"message", e.what()}};
  }
  return r;
}

json mode_name(Mode m) { return m == Mode::rational ? "rational" : "padic"; }

json error_report(const RunConfig& cfg, const json& err) {
  return {{"schema", "v1"}, {"subcommand", cfg.subcommand}, {"mode", mode_name(cfg.mode)}, {"status", "error"}, {"error", err}};
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"lt", "mellin", "factors", "zeta", "period", "ratio", "coleman", "selftest"};
  return names;
}

RunResult run(const RunConfig& cfg) {
  Handler h = nullptr;
  try {
    h = handler_for(cfg.subcommand);
    if (cfg.precision < 1) throw SchemaError("precision must be >= 1");
    if (cfg.jobs < 1) throw SchemaError("jobs must be >= 1");
    if (cfg.trunc && *cfg.trunc < 1) throw SchemaError("trunc must be >= 1");
    if (cfg.input.is_object() && cfg.input.contains("schema") && cfg.input.at("schema") != "v1")
      throw SchemaError("unsupported schema " + cfg.input.at("schema").dump());
  } catch (const Error& e) {
    return {2, error_report(cfg, {{"kind", e.kind()}, {"message", e.what()}})};
  }

  json report = {{"schema", "v1"}, {"subcommand", cfg.subcommand}, {"mode", mode_name(cfg.mode)}, {"inputs", cfg.input}};
  if (cfg.mode == Mode::padic) report["precision"] = cfg.precision;
  if (cfg.trunc) report["trunc"] = *cfg.trunc;

  if (cfg.input.is_object() && cfg.input.contains("batch")) {
    const auto& items = cfg.input.at("batch");
    if (!items.is_array()) return {2, error_report(cfg, {{"kind", "schema"}, {"message", "batch must be an array"}})};
    std::vector<ItemResult> results(items.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < items.size(); i = next++) results[i] = run_item(cfg, h, items[i]);
    };
    std::vector<std::thread> pool;
    const auto W = std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), std::max<std::size_t>(items.size(), 1));
    for (std::size_t i = 1; i < W; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    int code = 0;
    json outs = json::array(), checks = json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i];
      code = std::max(code, r.code);
      outs.push_back(r.error.is_null() ? r.outputs : json{{"error", r.error}});
      for (const auto& c : r.checks) checks.push_back({{"name", std::to_string(i) + ":" + c.at("name").get<std::string>()}, {"pass", c.at("pass")}});
    }
    report["outputs"] = outs;
    report["checks"] = checks;
    report["status"] = code == 0 ? "pass" : code == 2 ? "error" : "fail";
    return {code, report};
  }

  const auto r = run_item(cfg, h, cfg.input);
  if (!r.error.is_null()) {
    auto rep = error_report(cfg, r.error);
    rep["inputs"] = cfg.input;
    return {r.code, rep};
  }
  report["outputs"] = r.outputs;
  report["checks"] = r.checks;
  report["status"] = r.code == 0 ? "pass" : "fail";
  return {r.code, report};
}

RunResult run_text(RunConfig config, const std::string& text) {
  try {
    config.input = text.find_first_not_of(" \t\r\n") == std::string::npos ? json::object() : json::parse(text);
  } catch (const json::parse_error& e) {
    return {2, error_report(config, {{"kind", "schema"}, {"message", std::string("malformed JSON: ") + e.what()}})};
  }
  return run(config);
}

}  // namespace ltk::cli
