#pragma once

#include <concepts>
#include <string>

#include "ltk/number_theory.hpp"
#include "ltk/padic.hpp"
#include "ltk/rational.hpp"

namespace ltk {

// A coefficient ring element. Each element knows its context (the ring it
// lives in), so zero/one can always be recovered from any element.
template <class R>
concept CoeffRing = requires(const R& a, const R& b) {
  typename R::context_type;
  { a + b } -> std::convertible_to<R>;
  { a - b } -> std::convertible_to<R>;
  { a * b } -> std::convertible_to<R>;
  { -a } -> std::convertible_to<R>;
  { a == b } -> std::convertible_to<bool>;
  { a.is_zero() } -> std::convertible_to<bool>;
  { a.context() } -> std::convertible_to<typename R::context_type>;
  { a.str() } -> std::convertible_to<std::string>;
};

template <CoeffRing R>
R pow(R base, unsigned long long e) {
  R acc = base.context().one();
  while (e > 0) {
    if (e & 1ULL) acc *= base;
    e >>= 1ULL;
    if (e > 0) base *= base;
  }
  return acc;
}

// Primitive roots of unity available in the base rings.
inline Rational primitive_root_of_unity(const RationalField& f, unsigned long order) {
  if (order == 1) return f.one();
  if (order == 2) return f.from_int(-1);
  throw DomainError("Q contains no primitive root of unity of order " + std::to_string(order));
}

inline PadicInt primitive_root_of_unity(const PadicRing& ring, unsigned long order) {
  const unsigned long p = ring.p();
  if (order == 1) return ring.one();
  if (order == 2) return ring.from_int(-1);
  if (p == 2 || (p - 1) % order != 0)
    throw DomainError("Z_" + std::to_string(p) + " contains no primitive root of unity of order " +
                      std::to_string(order));
  const unsigned long g = primitive_root_mod(p);
  return pow(teichmuller(static_cast<long long>(g), ring), (p - 1) / order);
}

}  // namespace ltk
