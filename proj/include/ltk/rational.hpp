#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <string>

#include "ltk/errors.hpp"

namespace ltk {

class Rational;

/// Context for exact rational coefficients. Carries no state.
struct RationalField {
  Rational zero() const;
  Rational one() const;
  Rational from_int(long long n) const;
  Rational from_rational(const Rational& q) const;
  friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

/// Exact element of Q backed by GMP.
class Rational {
 public:
  using context_type = RationalField;

  Rational() = default;
  Rational(long long n) : v_(static_cast<long>(n)) {}  // NOLINT: implicit by intent
  Rational(long long num, long long den) : v_(static_cast<long>(num), static_cast<long>(den)) {
    if (den == 0) throw DomainError("rational with zero denominator");
    v_.canonicalize();
  }
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }
  explicit Rational(const mpz_class& z) : v_(z) {}

  // Accepts "a", "-a", "a/b".
  static Rational parse(const std::string& s) {
    mpq_class q;
    if (s.empty() || q.set_str(s, 10) != 0) throw SchemaError("not a rational: '" + s + "'");
    if (q.get_den() == 0) throw SchemaError("zero denominator: '" + s + "'");
    q.canonicalize();
    return Rational(q);
  }

  RationalField context() const { return {}; }
  const mpq_class& value() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  // p-adic valuation; +infinity is reported as INT32_MAX.
  int valuation(unsigned long p) const {
    if (is_zero()) return INT32_MAX;
    return count_(v_.get_num(), p) - count_(v_.get_den(), p);
  }

  std::string str() const { return v_.get_str(); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw DomainError("division by zero");
    v_ /= o.v_;
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend std::ostream& operator<<(std::ostream& os, const Rational& a) { return os << a.str(); }

 private:
  static int count_(mpz_class z, unsigned long p) {
    int k = 0;
    while (z != 0 && mpz_divisible_ui_p(z.get_mpz_t(), p)) {
      z /= p;
      ++k;
    }
    return k;
  }

  mpq_class v_;
};

inline Rational RationalField::zero() const { return Rational(0); }
inline Rational RationalField::one() const { return Rational(1); }
inline Rational RationalField::from_int(long long n) const { return Rational(n); }
inline Rational RationalField::from_rational(const Rational& q) const { return q; }

inline Rational inverse(const Rational& a) {
  if (a.is_zero()) throw DomainError("inverse of zero");
  return Rational(1) / a;
}

inline Rational divide_by_p_power(const Rational& a, unsigned long p, int k) {
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), p, static_cast<unsigned long>(k));
  return a / Rational(m);
}

}  // namespace ltk
