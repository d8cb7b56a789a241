#pragma once

#include <gmpxx.h>

#include <memory>
#include <ostream>
#include <string>

#include "ltk/errors.hpp"
#include "ltk/rational.hpp"

namespace ltk {

class PadicInt;

namespace detail {
struct PadicSpec {
  unsigned long p;
  int N;
  mpz_class modulus;  // p^N
};
}  // namespace detail

/// Fixed-modulus context: residues mod p^N. Cheap to copy.
class PadicRing {
 public:
  PadicRing(unsigned long p, int N);

  unsigned long p() const { return spec_->p; }
  int precision() const { return spec_->N; }
  const mpz_class& modulus() const { return spec_->modulus; }

  PadicInt zero() const;
  PadicInt one() const;
  PadicInt from_int(long long n) const;
  PadicInt from_integer(const mpz_class& z) const;
  // Throws PrecisionError when p divides the denominator.
  PadicInt from_rational(const Rational& q) const;

  friend bool operator==(const PadicRing& a, const PadicRing& b) {
    return a.spec_ == b.spec_ || (a.p() == b.p() && a.precision() == b.precision());
  }

 private:
  friend class PadicInt;
  std::shared_ptr<const detail::PadicSpec> spec_;
};

/// Element of Z_p known modulo p^prec, 0 <= prec <= N. The residue is kept
/// reduced modulo p^prec.
class PadicInt {
 public:
  using context_type = PadicRing;

  PadicInt(PadicRing ring, mpz_class residue, int prec);

  PadicRing context() const { return ring_; }
  const mpz_class& residue() const { return r_; }
  int precision() const { return prec_; }
  unsigned long p() const { return ring_.p(); }

  // min(v_p(residue), precision)
  int valuation() const;
  bool is_zero() const { return r_ == 0; }
  bool is_unit() const { return prec_ > 0 && valuation() == 0; }

  std::string str() const;

  PadicInt& operator+=(const PadicInt& o);
  PadicInt& operator-=(const PadicInt& o);
  PadicInt& operator*=(const PadicInt& o);
  friend PadicInt operator+(PadicInt a, const PadicInt& b) { return a += b; }
  friend PadicInt operator-(PadicInt a, const PadicInt& b) { return a -= b; }
  friend PadicInt operator*(PadicInt a, const PadicInt& b) { return a *= b; }
  friend PadicInt operator-(const PadicInt& a);
  // Equality within the smaller of the two known precisions.
  friend bool operator==(const PadicInt& a, const PadicInt& b);
  friend bool operator!=(const PadicInt& a, const PadicInt& b) { return !(a == b); }

 private:
  static mpz_class pow_p(const PadicRing& ring, int k);
  void normalize();

  PadicRing ring_;
  mpz_class r_;
  int prec_;
};

inline std::ostream& operator<<(std::ostream& os, const PadicInt& a) { return os << a.str(); }

// Division is only defined by units; anything else is a PrecisionError.
PadicInt inverse(const PadicInt& a);

/// a / p^k for a known multiple of p^k. The result is known to k fewer
/// digits; PrecisionError if the residue is not divisible by p^k.
PadicInt divide_by_p_power(const PadicInt& a, int k);
inline PadicInt divide_by_p_power(const PadicInt& a, unsigned long p, int k) {
  if (p != a.p()) throw DomainError("divide_by_p_power: wrong prime");
  return divide_by_p_power(a, k);
}

/// Teichmuller representative of the residue class u mod p.
PadicInt teichmuller(long long u, const PadicRing& ring);

/// Reduction Z_(p) -> Z/p^N of a p-integral rational.
inline PadicInt reduce(const Rational& q, const PadicRing& ring) { return ring.from_rational(q); }

}  // namespace ltk
