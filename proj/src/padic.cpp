#include "ltk/padic.hpp"

#include <algorithm>

namespace ltk {

PadicRing::PadicRing(unsigned long p, int N) {
  if (p < 2) throw DomainError("p-adic ring needs a prime p >= 2");
  if (N < 1) throw PrecisionError("p-adic precision must be >= 1");
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), p, static_cast<unsigned long>(N));
  spec_ = std::make_shared<const detail::PadicSpec>(detail::PadicSpec{p, N, m});
}

PadicInt PadicRing::zero() const { return PadicInt(*this, 0, precision()); }
PadicInt PadicRing::one() const { return PadicInt(*this, 1, precision()); }
PadicInt PadicRing::from_int(long long n) const {
  return PadicInt(*this, mpz_class(static_cast<long>(n)), precision());
}
PadicInt PadicRing::from_integer(const mpz_class& z) const { return PadicInt(*this, z, precision()); }

PadicInt PadicRing::from_rational(const Rational& q) const {
  mpz_class den = q.den();
  if (mpz_divisible_ui_p(den.get_mpz_t(), p()))
    throw PrecisionError("rational " + q.str() + " is not p-integral for p=" + std::to_string(p()));
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), modulus().get_mpz_t());
  return PadicInt(*this, q.num() * inv, precision());
}

mpz_class PadicInt::pow_p(const PadicRing& ring, int k) {
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), ring.p(), static_cast<unsigned long>(k));
  return m;
}

PadicInt::PadicInt(PadicRing ring, mpz_class residue, int prec)
    : ring_(std::move(ring)), r_(std::move(residue)), prec_(std::clamp(prec, 0, ring_.precision())) {
  normalize();
}

void PadicInt::normalize() {
  if (prec_ == ring_.precision()) {
    mpz_fdiv_r(r_.get_mpz_t(), r_.get_mpz_t(), ring_.modulus().get_mpz_t());
  } else {
    mpz_class m = pow_p(ring_, prec_);
    mpz_fdiv_r(r_.get_mpz_t(), r_.get_mpz_t(), m.get_mpz_t());
  }
}

int PadicInt::valuation() const {
  if (r_ == 0) return prec_;
  return static_cast<int>(mpz_remove(mpz_class().get_mpz_t(), r_.get_mpz_t(), mpz_class(p()).get_mpz_t()));
}

std::string PadicInt::str() const {
  std::string s = r_.get_str();
  if (prec_ < ring_.precision()) s += "+O(" + std::to_string(p()) + "^" + std::to_string(prec_) + ")";
  return s;
}

PadicInt& PadicInt::operator+=(const PadicInt& o) {
  r_ += o.r_;
  prec_ = std::min(prec_, o.prec_);
  normalize();
  return *this;
}

PadicInt& PadicInt::operator-=(const PadicInt& o) {
  r_ -= o.r_;
  prec_ = std::min(prec_, o.prec_);
  normalize();
  return *this;
}

PadicInt& PadicInt::operator*=(const PadicInt& o) {
  const int va = valuation();
  const int vb = o.valuation();
  prec_ = std::min({ring_.precision(), prec_ + vb, o.prec_ + va});
  r_ *= o.r_;
  normalize();
  return *this;
}

PadicInt operator-(const PadicInt& a) { return PadicInt(a.ring_, -a.r_, a.prec_); }

bool operator==(const PadicInt& a, const PadicInt& b) {
  const int k = std::min(a.prec_, b.prec_);
  mpz_class d = a.r_ - b.r_;
  mpz_class m = PadicInt::pow_p(a.ring_, k);
  return mpz_divisible_p(d.get_mpz_t(), m.get_mpz_t()) != 0;
}

PadicInt inverse(const PadicInt& a) {
  if (!a.is_unit())
    throw PrecisionError("fixed-modulus division by a non-unit (" + a.str() + ")");
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), a.p(), static_cast<unsigned long>(a.precision()));
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), a.residue().get_mpz_t(), m.get_mpz_t());
  return PadicInt(a.context(), inv, a.precision());
}

PadicInt teichmuller(long long u, const PadicRing& ring) {
  const long long p = static_cast<long long>(ring.p());
  if (((u % p) + p) % p == 0)
    throw InvalidUnitError("teichmuller: " + std::to_string(u) + " is divisible by p=" + std::to_string(p));
  // x -> x^p converges to the fixed point in at most N steps.
  mpz_class x(static_cast<long>(u));
  mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), ring.modulus().get_mpz_t());
  for (int i = 0; i <= ring.precision(); ++i) {
    mpz_class y;
    mpz_powm_ui(y.get_mpz_t(), x.get_mpz_t(), ring.p(), ring.modulus().get_mpz_t());
    if (y == x) break;
    x = y;
  }
  return ring.from_integer(x);
}

PadicInt divide_by_p_power(const PadicInt& a, int k) {
  if (k < 0) throw DomainError("negative power of p");
  if (a.precision() < k || (!a.is_zero() && a.valuation() < k))
    throw PrecisionError(a.str() + " is not divisible by " + std::to_string(a.p()) + "^" + std::to_string(k));
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), a.p(), static_cast<unsigned long>(k));
  return PadicInt(a.context(), a.residue() / m, a.precision() - k);
}

}  // namespace ltk
