#pragma once

#include <algorithm>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ltk/ring.hpp"

namespace ltk {

/// Power series c_0 + c_1 T + ... + c_D T^D + O(T^{D+1}) over a coefficient
/// ring. The truncation degree D travels with the value; binary operations
/// keep the smaller one.
template <CoeffRing R>
class TruncatedSeries {
 public:
  using coeff_type = R;
  using context_type = typename R::context_type;

  TruncatedSeries(context_type ctx, int trunc) : ctx_(std::move(ctx)), c_(check_(trunc) + 1, ctx_.zero()) {}
  TruncatedSeries(context_type ctx, std::vector<R> coeffs, int trunc) : ctx_(std::move(ctx)) {
    coeffs.resize(static_cast<std::size_t>(check_(trunc)) + 1, ctx_.zero());
    c_ = std::move(coeffs);
  }

  static TruncatedSeries variable(const context_type& ctx, int trunc) {
    TruncatedSeries s(ctx, trunc);
    if (trunc >= 1) s.c_[1] = ctx.one();
    return s;
  }
  static TruncatedSeries constant(const context_type& ctx, const R& a, int trunc) {
    TruncatedSeries s(ctx, trunc);
    s.c_[0] = a;
    return s;
  }
  static TruncatedSeries from_ints(const context_type& ctx, const std::vector<long long>& v, int trunc) {
    TruncatedSeries s(ctx, trunc);
    for (std::size_t i = 0; i < v.size() && i < s.c_.size(); ++i) s.c_[i] = ctx.from_int(v[i]);
    return s;
  }

  const context_type& context() const { return ctx_; }
  int trunc() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<R>& coefficients() const { return c_; }
  const R& operator[](std::size_t i) const { return c_[i]; }
  R coeff(int i) const { return i >= 0 && i <= trunc() ? c_[static_cast<std::size_t>(i)] : ctx_.zero(); }
  void set(int i, R v) {
    if (i < 0 || i > trunc()) throw DomainError("coefficient index beyond truncation degree");
    c_[static_cast<std::size_t>(i)] = std::move(v);
  }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const R& x) { return x.is_zero(); });
  }
  /// Largest index with a nonzero coefficient, -1 for zero.
  int degree() const {
    for (int i = trunc(); i >= 0; --i)
      if (!c_[static_cast<std::size_t>(i)].is_zero()) return i;
    return -1;
  }

  TruncatedSeries truncated(int d) const {
    if (d > trunc()) throw DomainError("cannot raise the truncation degree of a series");
    return TruncatedSeries(ctx_, std::vector<R>(c_.begin(), c_.begin() + d + 1), d);
  }

  std::string str() const {
    std::string s;
    for (int i = 0; i <= trunc(); ++i) {
      const auto& x = c_[static_cast<std::size_t>(i)];
      if (x.is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += "(" + x.str() + ")";
      if (i > 0) s += "*T^" + std::to_string(i);
    }
    return (s.empty() ? "0" : s) + " + O(T^" + std::to_string(trunc() + 1) + ")";
  }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    shrink_(o.trunc());
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  TruncatedSeries& operator-=(const TruncatedSeries& o) {
    shrink_(o.trunc());
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  TruncatedSeries& operator*=(const R& s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator-(TruncatedSeries a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend TruncatedSeries operator*(TruncatedSeries a, const R& s) { return a *= s; }
  friend TruncatedSeries operator*(const R& s, TruncatedSeries a) { return a *= s; }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    const int d = std::min(a.trunc(), b.trunc());
    TruncatedSeries r(a.ctx_, d);
    for (int i = 0; i <= d; ++i) {
      const auto& ai = a.c_[static_cast<std::size_t>(i)];
      if (ai.is_zero()) continue;
      for (int j = 0; i + j <= d; ++j) {
        const auto& bj = b.c_[static_cast<std::size_t>(j)];
        if (!bj.is_zero()) r.c_[static_cast<std::size_t>(i + j)] += ai * bj;
      }
    }
    return r;
  }
  TruncatedSeries& operator*=(const TruncatedSeries& o) { return *this = *this * o; }
  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.trunc() == b.trunc() && a.c_ == b.c_;
  }
  friend bool operator!=(const TruncatedSeries& a, const TruncatedSeries& b) { return !(a == b); }

  /// d/dT; known to one degree less.
  TruncatedSeries derivative() const {
    if (trunc() < 1) throw DomainError("derivative of a series truncated at degree 0");
    TruncatedSeries r(ctx_, trunc() - 1);
    for (int i = 1; i <= trunc(); ++i)
      r.c_[static_cast<std::size_t>(i - 1)] = c_[static_cast<std::size_t>(i)] * ctx_.from_int(i);
    return r;
  }

  /// Antiderivative with zero constant term; divides by k+1, so a
  /// fixed-modulus ring raises PrecisionError once p | k+1 is needed.
  TruncatedSeries integral() const {
    TruncatedSeries r(ctx_, trunc() + 1);
    for (int i = 0; i <= trunc(); ++i) {
      const auto& x = c_[static_cast<std::size_t>(i)];
      if (x.is_zero()) continue;
      r.c_[static_cast<std::size_t>(i + 1)] = x * inverse(ctx_.from_int(i + 1));
    }
    return r;
  }

  /// Multiplicative inverse; the constant term must be a unit.
  TruncatedSeries inverse_series() const {
    const R a0inv = inverse(c_[0]);
    TruncatedSeries r(ctx_, trunc());
    r.c_[0] = a0inv;
    for (int n = 1; n <= trunc(); ++n) {
      R s = ctx_.zero();
      for (int k = 1; k <= n; ++k) {
        const auto& ck = c_[static_cast<std::size_t>(k)];
        if (!ck.is_zero()) s += ck * r.c_[static_cast<std::size_t>(n - k)];
      }
      r.c_[static_cast<std::size_t>(n)] = -(s * a0inv);
    }
    return r;
  }

  /// Evaluate the stored coefficients as a polynomial at x (any ring S with a
  /// coefficient embedding). Exact only for genuine polynomials.
  template <class S, class Embed>
  S evaluate_polynomial(const S& x, Embed&& embed) const {
    S acc = embed(c_.back());
    for (std::size_t i = c_.size() - 1; i-- > 0;) acc = acc * x + embed(c_[i]);
    return acc;
  }
  R evaluate_polynomial(const R& x) const {
    return evaluate_polynomial(x, [](const R& a) { return a; });
  }

  template <class F>
  auto map(F&& f, const typename std::invoke_result_t<F, const R&>::context_type& target) const {
    using S = std::invoke_result_t<F, const R&>;
    std::vector<S> out;
    out.reserve(c_.size());
    for (const auto& x : c_) out.push_back(f(x));
    return TruncatedSeries<S>(target, std::move(out), trunc());
  }

 private:
  static int check_(int trunc) {
    if (trunc < 0) throw DomainError("truncation degree must be >= 0");
    return trunc;
  }
  void shrink_(int d) {
    if (d < trunc()) c_.resize(static_cast<std::size_t>(d) + 1, ctx_.zero());
  }

  context_type ctx_;
  std::vector<R> c_;
};

template <CoeffRing R>
std::ostream& operator<<(std::ostream& os, const TruncatedSeries<R>& s) {
  return os << s.str();
}

/// g(f(T)) mod T^{D+1}; requires f(0) = 0.
template <CoeffRing R>
TruncatedSeries<R> series_compose(const TruncatedSeries<R>& g, const TruncatedSeries<R>& f) {
  if (!f[0].is_zero()) throw CompositionError("series_compose: inner series has nonzero constant term");
  const int d = std::min(g.trunc(), f.trunc());
  const auto fd = f.truncated(d);
  TruncatedSeries<R> acc = TruncatedSeries<R>::constant(g.context(), g[static_cast<std::size_t>(d)], d);
  for (int k = d - 1; k >= 0; --k) {
    acc = acc * fd;
    acc.set(0, acc[0] + g[static_cast<std::size_t>(k)]);
  }
  return acc;
}

/// Compositional inverse h with f(h(T)) = T mod T^{D+1}.
template <CoeffRing R>
TruncatedSeries<R> series_revert(const TruncatedSeries<R>& f) {
  if (f.trunc() < 1) throw ReversionError("series_revert needs truncation degree >= 1");
  if (!f[0].is_zero()) throw ReversionError("series_revert: nonzero constant term");
  R inv1 = f.context().zero();
  try {
    inv1 = inverse(f[1]);
  } catch (const Error&) {
    throw ReversionError("series_revert: linear coefficient " + f[1].str() + " is not invertible");
  }
  const int d = f.trunc();
  auto h = TruncatedSeries<R>::variable(f.context(), d) * inv1;
  for (int n = 2; n <= d; ++n) {
    const auto fh = series_compose(f.truncated(n), h.truncated(n));
    const R e = fh[static_cast<std::size_t>(n)];
    if (!e.is_zero()) h.set(n, h[static_cast<std::size_t>(n)] - e * inv1);
  }
  return h;
}

/// Polynomial substitution g(x) for a series x that may have a nonzero
/// constant term. Exact when g is a genuine polynomial of degree <= D.
template <CoeffRing R>
TruncatedSeries<R> polynomial_substitute(const TruncatedSeries<R>& g, const TruncatedSeries<R>& x) {
  const int d = std::min(g.trunc(), x.trunc());
  const auto xd = x.truncated(d);
  TruncatedSeries<R> acc = TruncatedSeries<R>::constant(g.context(), g[static_cast<std::size_t>(g.trunc())], d);
  for (int k = g.trunc() - 1; k >= 0; --k) {
    acc = acc * xd;
    acc.set(0, acc[0] + g[static_cast<std::size_t>(k)]);
  }
  return acc;
}

/// Bivariate series sum c_{ij} X^i Y^j truncated at total degree D and at
/// Y-degree K <= D.
template <CoeffRing R>
class BivariateSeries {
 public:
  using context_type = typename R::context_type;

  BivariateSeries(context_type ctx, int total, int ydeg = -1)
      : ctx_(std::move(ctx)), d_(total), k_(ydeg < 0 ? total : std::min(ydeg, total)) {
    if (total < 0) throw DomainError("bivariate truncation must be >= 0");
    rows_.assign(static_cast<std::size_t>(k_) + 1, {});
    for (int j = 0; j <= k_; ++j) rows_[static_cast<std::size_t>(j)].assign(static_cast<std::size_t>(d_ - j) + 1, ctx_.zero());
  }

  static BivariateSeries x(const context_type& ctx, int total, int ydeg = -1) {
    BivariateSeries s(ctx, total, ydeg);
    if (total >= 1) s.at(1, 0) = ctx.one();
    return s;
  }
  static BivariateSeries y(const context_type& ctx, int total, int ydeg = -1) {
    BivariateSeries s(ctx, total, ydeg);
    if (total >= 1 && s.k_ >= 1) s.at(0, 1) = ctx.one();
    return s;
  }
  /// The univariate series f placed in the variable X (or Y).
  static BivariateSeries in_x(const TruncatedSeries<R>& f, int total, int ydeg = -1) {
    BivariateSeries s(f.context(), total, ydeg);
    for (int i = 0; i <= std::min(total, f.trunc()); ++i) s.at(i, 0) = f[static_cast<std::size_t>(i)];
    return s;
  }
  static BivariateSeries in_y(const TruncatedSeries<R>& f, int total, int ydeg = -1) {
    BivariateSeries s(f.context(), total, ydeg);
    for (int j = 0; j <= std::min(s.k_, f.trunc()); ++j) s.at(0, j) = f[static_cast<std::size_t>(j)];
    return s;
  }

  const context_type& context() const { return ctx_; }
  int total_degree() const { return d_; }
  int y_degree() const { return k_; }
  bool in_range(int i, int j) const { return i >= 0 && j >= 0 && j <= k_ && i + j <= d_; }
  R& at(int i, int j) { return rows_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]; }
  const R& at(int i, int j) const { return rows_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]; }
  R coeff(int i, int j) const { return in_range(i, j) ? at(i, j) : ctx_.zero(); }

  bool is_zero() const {
    for (const auto& row : rows_)
      for (const auto& c : row)
        if (!c.is_zero()) return false;
    return true;
  }

  BivariateSeries& operator+=(const BivariateSeries& o) {
    for (int j = 0; j <= k_; ++j)
      for (int i = 0; i + j <= d_; ++i) at(i, j) += o.coeff(i, j);
    return *this;
  }
  BivariateSeries& operator-=(const BivariateSeries& o) {
    for (int j = 0; j <= k_; ++j)
      for (int i = 0; i + j <= d_; ++i) at(i, j) -= o.coeff(i, j);
    return *this;
  }
  friend BivariateSeries operator+(BivariateSeries a, const BivariateSeries& b) { return a += b; }
  friend BivariateSeries operator-(BivariateSeries a, const BivariateSeries& b) { return a -= b; }
  friend BivariateSeries operator*(const BivariateSeries& a, const BivariateSeries& b) {
    BivariateSeries r(a.ctx_, std::min(a.d_, b.d_), std::min(a.k_, b.k_));
    // Sparse over b: Lubin-Tate laws are usually very sparse.
    std::vector<std::pair<std::pair<int, int>, R>> nb;
    for (int j = 0; j <= std::min(b.k_, r.k_); ++j)
      for (int i = 0; i + j <= r.d_; ++i)
        if (!b.at(i, j).is_zero()) nb.push_back({{i, j}, b.at(i, j)});
    for (int j = 0; j <= std::min(a.k_, r.k_); ++j)
      for (int i = 0; i + j <= r.d_; ++i) {
        const auto& ac = a.at(i, j);
        if (ac.is_zero()) continue;
        for (const auto& [ij, bc] : nb) {
          const int ii = i + ij.first, jj = j + ij.second;
          if (r.in_range(ii, jj)) r.at(ii, jj) += ac * bc;
        }
      }
    return r;
  }
  friend bool operator==(const BivariateSeries& a, const BivariateSeries& b) {
    return a.d_ == b.d_ && a.k_ == b.k_ && a.rows_ == b.rows_;
  }

  BivariateSeries truncated(int total, int ydeg) const {
    BivariateSeries r(ctx_, std::min(total, d_), std::min(ydeg, k_));
    for (int j = 0; j <= r.k_; ++j)
      for (int i = 0; i + j <= r.d_; ++i) r.at(i, j) = at(i, j);
    return r;
  }

  /// F(Y, X).
  BivariateSeries swapped() const {
    if (k_ != d_) throw DomainError("swap needs a full triangular series");
    BivariateSeries r(ctx_, d_);
    for (int j = 0; j <= d_; ++j)
      for (int i = 0; i + j <= d_; ++i) r.at(j, i) = at(i, j);
    return r;
  }

  /// F(X, 0) and F(0, Y).
  TruncatedSeries<R> at_y_zero() const {
    TruncatedSeries<R> r(ctx_, d_);
    for (int i = 0; i <= d_; ++i) r.set(i, at(i, 0));
    return r;
  }
  TruncatedSeries<R> at_x_zero() const {
    TruncatedSeries<R> r(ctx_, k_);
    for (int j = 0; j <= k_; ++j) r.set(j, at(0, j));
    return r;
  }
  /// d/dX evaluated at X = 0, as a series in Y (known to degree D-1).
  TruncatedSeries<R> dx_at_x_zero() const {
    const int kk = std::min(k_, d_ - 1);
    TruncatedSeries<R> r(ctx_, kk);
    for (int j = 0; j <= kk; ++j) r.set(j, at(1, j));
    return r;
  }
  /// d/dY, dropping one total degree and one Y-degree.
  BivariateSeries dy() const {
    if (k_ < 1) throw DomainError("dy of a series with no Y-degree");
    BivariateSeries r(ctx_, d_ - 1, k_ - 1);
    for (int j = 1; j <= k_; ++j)
      for (int i = 0; i + j <= d_; ++i) r.at(i, j - 1) = at(i, j) * ctx_.from_int(j);
    return r;
  }
  /// Multiply by a series in Y.
  BivariateSeries times_y_series(const TruncatedSeries<R>& h) const {
    return *this * in_y(h, d_, k_);
  }

 private:
  context_type ctx_;
  int d_;
  int k_;
  std::vector<std::vector<R>> rows_;  // rows_[j][i] = coefficient of X^i Y^j
};

/// phi(F(X,Y)) for a bivariate F with zero constant term, truncated like F.
template <CoeffRing R>
BivariateSeries<R> compose_bivariate(const TruncatedSeries<R>& phi, const BivariateSeries<R>& f) {
  if (!f.coeff(0, 0).is_zero()) throw CompositionError("bivariate inner series has nonzero constant term");
  const int d = std::min(phi.trunc(), f.total_degree());
  BivariateSeries<R> acc(f.context(), f.total_degree(), f.y_degree());
  acc.at(0, 0) = phi[static_cast<std::size_t>(d)];
  for (int k = d - 1; k >= 0; --k) {
    acc = acc * f;
    acc.at(0, 0) += phi[static_cast<std::size_t>(k)];
  }
  return acc;
}

/// F(g(X), h(Y)) for univariate g, h with zero constant terms.
template <CoeffRing R>
BivariateSeries<R> substitute_bivariate(const BivariateSeries<R>& f, const TruncatedSeries<R>& g,
                                        const TruncatedSeries<R>& h) {
  const int d = f.total_degree();
  const auto gx = BivariateSeries<R>::in_x(g, d, f.y_degree());
  const auto hy = BivariateSeries<R>::in_y(h, d, f.y_degree());
  BivariateSeries<R> out(f.context(), d, f.y_degree());
  // Powers of h(Y) once, then Horner in g(X) per Y-power.
  std::vector<BivariateSeries<R>> hp;
  hp.push_back(BivariateSeries<R>(f.context(), d, f.y_degree()));
  hp[0].at(0, 0) = f.context().one();
  for (int j = 1; j <= f.y_degree(); ++j) hp.push_back(hp.back() * hy);
  for (int j = 0; j <= f.y_degree(); ++j) {
    BivariateSeries<R> acc(f.context(), d, f.y_degree());
    for (int i = d - j; i >= 0; --i) {
      acc = acc * gx;
      acc.at(0, 0) += f.at(i, j);
    }
    out += acc * hp[static_cast<std::size_t>(j)];
  }
  return out;
}

}  // namespace ltk
