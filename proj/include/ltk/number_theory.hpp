#pragma once

#include <cstdint>
#include <vector>

namespace ltk {

// Small-integer helpers for desk-scale moduli (everything fits in 64 bits).

bool is_prime(std::uint64_t n);
std::uint64_t ipow(std::uint64_t b, unsigned e);
std::uint64_t gcd_u(std::uint64_t a, std::uint64_t b);
std::uint64_t lcm_u(std::uint64_t a, std::uint64_t b);
std::uint64_t euler_phi(std::uint64_t n);
std::vector<std::uint64_t> divisors(std::uint64_t n);
std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m);
// Non-negative residue of a mod m.
std::uint64_t mod_u(long long a, std::uint64_t m);

// Smallest generator of (Z/n)^x; n must be 2, 4, q^k or 2q^k for an odd prime q.
unsigned long primitive_root_mod(unsigned long n);

// Integer coefficients (constant term first) of the m-th cyclotomic polynomial.
std::vector<long long> cyclotomic_polynomial(std::uint64_t m);

}  // namespace ltk
