#include "ltk/number_theory.hpp"

#include <map>
#include <mutex>
#include <numeric>

#include "ltk/errors.hpp"

namespace ltk {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

std::uint64_t gcd_u(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }
std::uint64_t lcm_u(std::uint64_t a, std::uint64_t b) { return a / std::gcd(a, b) * b; }

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t r = n;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    while (n % d == 0) n /= d;
    r -= r / d;
  }
  if (n > 1) r -= r / n;
  return r;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  unsigned __int128 r = 1 % m, x = b % m;
  while (e) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t mod_u(long long a, std::uint64_t m) {
  long long r = a % static_cast<long long>(m);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<long long>(m) : r);
}

unsigned long primitive_root_mod(unsigned long n) {
  if (n == 1 || n == 2) return 1;
  if (n == 4) return 3;
  const std::uint64_t ph = euler_phi(n);
  std::vector<std::uint64_t> primes;
  std::uint64_t t = ph;
  for (std::uint64_t d = 2; d * d <= t; ++d) {
    if (t % d) continue;
    primes.push_back(d);
    while (t % d == 0) t /= d;
  }
  if (t > 1) primes.push_back(t);
  for (unsigned long g = 2; g < n; ++g) {
    if (std::gcd<std::uint64_t>(g, n) != 1) continue;
    bool ok = true;
    for (auto q : primes)
      if (powmod(g, ph / q, n) == 1) { ok = false; break; }
    if (ok) return g;
  }
  throw DomainError("(Z/" + std::to_string(n) + ")^x is not cyclic");
}

std::vector<long long> cyclotomic_polynomial(std::uint64_t m) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::vector<long long>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(m); it != cache.end()) return it->second;
  }
  if (m == 0) throw DomainError("cyclotomic polynomial of order 0");
  // x^m - 1 divided exactly by every Phi_d, d | m, d < m.
  std::vector<long long> num(m + 1, 0);
  num[0] = -1;
  num[m] = 1;
  for (auto d : divisors(m)) {
    if (d == m) continue;
    const auto den = cyclotomic_polynomial(d);
    const std::size_t dd = den.size() - 1;
    std::vector<long long> q(num.size() - dd, 0);
    for (long long k = static_cast<long long>(num.size()) - 1; k >= static_cast<long long>(dd); --k) {
      const long long c = num[static_cast<std::size_t>(k)];  // den is monic
      q[static_cast<std::size_t>(k) - dd] = c;
      for (std::size_t j = 0; j <= dd; ++j) num[static_cast<std::size_t>(k) - dd + j] -= c * den[j];
    }
    num = std::move(q);
  }
  std::lock_guard<std::mutex> lock(mu);
  cache[m] = num;
  return num;
}

}  // namespace ltk
