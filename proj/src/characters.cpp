#include "ltk/characters.hpp"

#include <algorithm>

namespace ltk {

UnitGroup::UnitGroup(std::uint64_t l, int n) : l_(l), n_(n) {
  if (!is_prime(l)) throw DomainError("UnitGroup: " + std::to_string(l) + " is not prime");
  if (n < 0) throw LevelError("UnitGroup: negative level");
  mod_ = ipow(l, static_cast<unsigned>(n));
  order_ = n == 0 ? 1 : euler_phi(mod_);
  if (n >= 1) {
    if (l != 2) {
      gens_ = {primitive_root_mod(static_cast<unsigned long>(mod_))};
      orders_ = {order_};
    } else if (n == 2) {
      gens_ = {3};
      orders_ = {2};
    } else if (n >= 3) {
      gens_ = {mod_ - 1, 5};
      orders_ = {2, mod_ / 4};
    }
  }
  auto table = std::make_shared<std::map<std::uint64_t, std::vector<std::uint64_t>>>();
  // Enumerate prod g_i^{a_i}.
  std::vector<std::uint64_t> a(gens_.size(), 0);
  while (true) {
    std::uint64_t u = 1 % std::max<std::uint64_t>(mod_, 1);
    for (std::size_t i = 0; i < gens_.size(); ++i) u = static_cast<std::uint64_t>((static_cast<unsigned __int128>(u) * powmod(gens_[i], a[i], mod_)) % mod_);
    (*table)[mod_ <= 1 ? 0 : u] = a;
    std::size_t i = 0;
    while (i < a.size() && ++a[i] == orders_[i]) a[i++] = 0;
    if (i == a.size()) break;
  }
  if (table->size() != order_) throw DomainError("UnitGroup: generator table is inconsistent");
  logs_ = std::move(table);
}

const std::vector<std::uint64_t>& UnitGroup::log(std::uint64_t u) const {
  const std::uint64_t r = mod_ <= 1 ? 0 : u % mod_;
  auto it = logs_->find(r);
  if (it == logs_->end()) throw DomainError(std::to_string(u) + " is not a unit mod " + std::to_string(mod_));
  return it->second;
}

std::vector<std::uint64_t> UnitGroup::elements() const {
  std::vector<std::uint64_t> out;
  for (const auto& [u, a] : *logs_) out.push_back(mod_ <= 1 ? 1 : u);
  return out;
}

UnitCharacter::UnitCharacter(std::uint64_t l) : group_(l, 0) {}

UnitCharacter::UnitCharacter(std::uint64_t l, int level, std::vector<std::uint64_t> exps)
    : group_(l, level), exps_(std::move(exps)) {
  if (exps_.size() != group_.generators().size())
    throw DomainError("UnitCharacter: expected " + std::to_string(group_.generators().size()) + " generator values");
  for (std::size_t i = 0; i < exps_.size(); ++i) exps_[i] %= group_.generator_orders()[i];
}

std::vector<UnitCharacter> UnitCharacter::all(std::uint64_t l, int level) {
  UnitGroup g(l, level);
  std::vector<UnitCharacter> out;
  std::vector<std::uint64_t> a(g.generators().size(), 0);
  while (true) {
    out.emplace_back(l, level, a);
    std::size_t i = 0;
    while (i < a.size() && ++a[i] == g.generator_orders()[i]) a[i++] = 0;
    if (i == a.size()) break;
  }
  return out;
}

UnitCharacter UnitCharacter::quadratic(std::uint64_t l) {
  if (l == 2) throw DomainError("no Legendre character mod 2");
  return UnitCharacter(l, 1, {(l - 1) / 2});
}

UnitCharacter UnitCharacter::teichmuller_power(std::uint64_t l, int level, long long j) {
  if (level == 0) return UnitCharacter(l);
  UnitGroup g(l, level);
  if (l == 2) {
    if (level == 1) return UnitCharacter(l, 1, {});
    std::vector<std::uint64_t> e(g.generators().size(), 0);
    e[0] = mod_u(j, 2);
    return UnitCharacter(l, level, e);
  }
  const std::uint64_t lift = ipow(l, static_cast<unsigned>(level - 1));
  return UnitCharacter(l, level, {mod_u(j, l - 1) * lift});
}

std::uint64_t UnitCharacter::exponent() const {
  std::uint64_t e = 1;
  for (auto o : group_.generator_orders()) e = lcm_u(e, o);
  return e;
}

std::uint64_t UnitCharacter::order() const {
  std::uint64_t ord = 1;
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    const auto o = group_.generator_orders()[i];
    ord = lcm_u(ord, o / gcd_u(o, exps_[i]));
  }
  return ord;
}

std::uint64_t UnitCharacter::value_exponent(long long u) const {
  if (level() == 0) return 0;
  const auto& a = group_.log(mod_u(u, group_.modulus()));
  const std::uint64_t E = exponent();
  unsigned __int128 k = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto o = group_.generator_orders()[i];
    k += static_cast<unsigned __int128>(exps_[i]) * a[i] % o * (E / o);
  }
  return static_cast<std::uint64_t>(k % E);
}

int UnitCharacter::conductor() const {
  for (int c = 0; c <= level(); ++c) {
    bool trivial = true;
    const std::uint64_t step = ipow(prime(), static_cast<unsigned>(c));
    for (std::uint64_t u = 1; u < std::max<std::uint64_t>(group_.modulus(), 2) && trivial; u += step)
      if (u % prime() != 0 && value_exponent(static_cast<long long>(u)) != 0) trivial = false;
    if (trivial) return c;
  }
  return level();
}

UnitCharacter UnitCharacter::lift(int new_level) const {
  if (new_level < level()) throw LevelError("cannot lift a character to a lower level");
  if (new_level == level()) return *this;
  UnitGroup g(prime(), new_level);
  const std::uint64_t E = exponent();
  std::vector<std::uint64_t> e;
  for (std::size_t i = 0; i < g.generators().size(); ++i) {
    const auto o = g.generator_orders()[i];
    const std::uint64_t k = value_exponent(static_cast<long long>(g.generators()[i]));
    // zeta_E^k = zeta_o^{k o / E}; the order of chi(g_i) divides o.
    e.push_back(static_cast<std::uint64_t>((static_cast<unsigned __int128>(k) * o / E) % o));
  }
  return UnitCharacter(prime(), new_level, std::move(e));
}

UnitCharacter UnitCharacter::at_level(int new_level) const {
  if (new_level >= level()) return lift(new_level);
  if (new_level < conductor()) throw ConductorError("character does not factor through level " + std::to_string(new_level));
  if (new_level == 0) return UnitCharacter(prime());
  UnitGroup g(prime(), new_level);
  const std::uint64_t E = exponent();
  std::vector<std::uint64_t> e;
  for (std::size_t i = 0; i < g.generators().size(); ++i) {
    const auto o = g.generator_orders()[i];
    const std::uint64_t k = value_exponent(static_cast<long long>(g.generators()[i]));
    e.push_back(static_cast<std::uint64_t>((static_cast<unsigned __int128>(k) * o / E) % o));
  }
  return UnitCharacter(prime(), new_level, std::move(e));
}

UnitCharacter UnitCharacter::inverse() const {
  std::vector<std::uint64_t> e(exps_.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto o = group_.generator_orders()[i];
    e[i] = (o - exps_[i] % o) % o;
  }
  return UnitCharacter(prime(), level(), std::move(e));
}

UnitCharacter operator*(const UnitCharacter& a, const UnitCharacter& b) {
  if (a.prime() != b.prime()) throw DomainError("characters of different residue characteristic");
  const int n = std::max(a.level(), b.level());
  const auto x = a.lift(n), y = b.lift(n);
  std::vector<std::uint64_t> e(x.exps_.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = (x.exps_[i] + y.exps_[i]) % x.group_.generator_orders()[i];
  return UnitCharacter(a.prime(), n, std::move(e));
}

bool operator==(const UnitCharacter& a, const UnitCharacter& b) {
  if (a.prime() != b.prime()) return false;
  const int n = std::max(a.level(), b.level());
  return a.lift(n).exps_ == b.lift(n).exps_;
}

std::string UnitCharacter::str() const {
  std::string s = "chi mod " + std::to_string(prime()) + "^" + std::to_string(level()) + " [";
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(group_.generators()[i]) + "->" + std::to_string(exps_[i]) + "/" +
         std::to_string(group_.generator_orders()[i]);
  }
  return s + "]";
}

}  // namespace ltk
