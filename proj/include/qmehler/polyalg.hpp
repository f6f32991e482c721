#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "qmehler/qarith.hpp"

namespace qmehler {

/// Dense univariate polynomial; coefficient index = power of x.
/// Invariant: the highest-index coefficient is nonzero unless the polynomial
/// is zero (empty coefficient vector, degree -1).
template <RingScalar S>
class Poly1T {
 public:
  Poly1T() = default;
  explicit Poly1T(const S& c0) : c_{c0} { normalize(); }
  explicit Poly1T(std::vector<S> coeffs) : c_(std::move(coeffs)) { normalize(); }

  static Poly1T monomial(long k, const S& c = S(1)) {
    std::vector<S> v(static_cast<std::size_t>(k) + 1, S(0));
    v.back() = c;
    return Poly1T(std::move(v));
  }
  static Poly1T x() { return monomial(1); }

  long degree() const { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  S coeff(long k) const {
    return (k >= 0 && k < static_cast<long>(c_.size())) ? c_[static_cast<std::size_t>(k)] : S(0);
  }
  const std::vector<S>& coefficients() const { return c_; }

  template <RingScalar T>
  T eval(const T& x) const {
    T acc(0);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + static_cast<T>(c_[i]);
    return acc;
  }

  friend Poly1T operator+(const Poly1T& a, const Poly1T& b) {
    std::vector<S> v(std::max(a.c_.size(), b.c_.size()), S(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] = v[i] + a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] = v[i] + b.c_[i];
    return Poly1T(std::move(v));
  }
  friend Poly1T operator-(const Poly1T& a, const Poly1T& b) { return a + (b * S(-1)); }
  friend Poly1T operator*(const Poly1T& a, const Poly1T& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<S> v(a.c_.size() + b.c_.size() - 1, S(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] = v[i + j] + a.c_[i] * b.c_[j];
    return Poly1T(std::move(v));
  }
  friend Poly1T operator*(const Poly1T& a, const S& s) {
    std::vector<S> v = a.c_;
    for (auto& e : v) e = e * s;
    return Poly1T(std::move(v));
  }
  friend Poly1T operator*(const S& s, const Poly1T& a) { return a * s; }
  friend Poly1T operator/(const Poly1T& a, const S& s) {
    std::vector<S> v = a.c_;
    for (auto& e : v) e = e / s;
    return Poly1T(std::move(v));
  }
  friend bool operator==(const Poly1T& a, const Poly1T& b) { return a.c_ == b.c_; }

 private:
  void normalize() {
    while (!c_.empty() && c_.back() == S(0)) c_.pop_back();
  }
  std::vector<S> c_;
};

/// Dense bivariate polynomial on a rectangular coefficient grid;
/// coefficient (i, j) multiplies x^i y^j. Zero rows/columns beyond the
/// degree are trimmed so representations are canonical.
template <RingScalar S>
class Poly2T {
 public:
  Poly2T() = default;
  explicit Poly2T(const S& c0) : nx_(1), ny_(1), c_{c0} { normalize(); }

  static Poly2T monomial(long i, long j, const S& c = S(1)) {
    Poly2T p;
    p.nx_ = i + 1;
    p.ny_ = j + 1;
    p.c_.assign(static_cast<std::size_t>(p.nx_ * p.ny_), S(0));
    p.c_.back() = c;
    p.normalize();
    return p;
  }
  static Poly2T x() { return monomial(1, 0); }
  static Poly2T y() { return monomial(0, 1); }

  /// Embeds a univariate polynomial as a polynomial in x (or in y).
  static Poly2T from_poly_in_x(const Poly1T<S>& p) {
    Poly2T out;
    if (p.is_zero()) return out;
    out.nx_ = p.degree() + 1;
    out.ny_ = 1;
    out.c_.assign(static_cast<std::size_t>(out.nx_), S(0));
    for (long i = 0; i <= p.degree(); ++i) out.c_[static_cast<std::size_t>(i)] = p.coeff(i);
    return out;
  }
  static Poly2T from_poly_in_y(const Poly1T<S>& p) { return from_poly_in_x(p).swapped_variables(); }

  bool is_zero() const { return c_.empty(); }
  long x_degree() const { return nx_ - 1; }
  long y_degree() const { return ny_ - 1; }

  long total_degree() const {
    long best = -1;
    for (long i = 0; i < nx_; ++i)
      for (long j = 0; j < ny_; ++j)
        if (!(coeff(i, j) == S(0))) best = std::max(best, i + j);
    return best;
  }

  S coeff(long i, long j) const {
    if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return S(0);
    return c_[static_cast<std::size_t>(i * ny_ + j)];
  }

  template <RingScalar T>
  T eval(const T& x, const T& y) const {
    T acc(0);
    for (long i = nx_; i-- > 0;) {
      T row(0);
      for (long j = ny_; j-- > 0;) row = row * y + static_cast<T>(c_[static_cast<std::size_t>(i * ny_ + j)]);
      acc = acc * x + row;
    }
    return acc;
  }

  Poly2T swapped_variables() const {
    Poly2T out;
    out.nx_ = ny_;
    out.ny_ = nx_;
    out.c_.assign(c_.size(), S(0));
    for (long i = 0; i < nx_; ++i)
      for (long j = 0; j < ny_; ++j) out.c_[static_cast<std::size_t>(j * nx_ + i)] = coeff(i, j);
    out.normalize();
    return out;
  }

  friend Poly2T operator+(const Poly2T& a, const Poly2T& b) {
    Poly2T out;
    out.nx_ = std::max(a.nx_, b.nx_);
    out.ny_ = std::max(a.ny_, b.ny_);
    if (out.nx_ == 0 || out.ny_ == 0) return {};
    out.c_.assign(static_cast<std::size_t>(out.nx_ * out.ny_), S(0));
    for (long i = 0; i < out.nx_; ++i)
      for (long j = 0; j < out.ny_; ++j)
        out.c_[static_cast<std::size_t>(i * out.ny_ + j)] = a.coeff(i, j) + b.coeff(i, j);
    out.normalize();
    return out;
  }
  friend Poly2T operator-(const Poly2T& a, const Poly2T& b) { return a + (b * S(-1)); }
  friend Poly2T operator*(const Poly2T& a, const Poly2T& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Poly2T out;
    out.nx_ = a.nx_ + b.nx_ - 1;
    out.ny_ = a.ny_ + b.ny_ - 1;
    out.c_.assign(static_cast<std::size_t>(out.nx_ * out.ny_), S(0));
    for (long ia = 0; ia < a.nx_; ++ia)
      for (long ja = 0; ja < a.ny_; ++ja) {
        const S& ca = a.c_[static_cast<std::size_t>(ia * a.ny_ + ja)];
        if (ca == S(0)) continue;
        for (long ib = 0; ib < b.nx_; ++ib)
          for (long jb = 0; jb < b.ny_; ++jb) {
            std::size_t idx = static_cast<std::size_t>((ia + ib) * out.ny_ + (ja + jb));
            out.c_[idx] = out.c_[idx] + ca * b.c_[static_cast<std::size_t>(ib * b.ny_ + jb)];
          }
      }
    out.normalize();
    return out;
  }
  friend Poly2T operator*(const Poly2T& a, const S& s) {
    Poly2T out = a;
    for (auto& e : out.c_) e = e * s;
    out.normalize();
    return out;
  }
  friend Poly2T operator*(const S& s, const Poly2T& a) { return a * s; }
  friend Poly2T operator/(const Poly2T& a, const S& s) {
    Poly2T out = a;
    for (auto& e : out.c_) e = e / s;
    out.normalize();
    return out;
  }
  friend bool operator==(const Poly2T& a, const Poly2T& b) {
    return a.nx_ == b.nx_ && a.ny_ == b.ny_ && a.c_ == b.c_;
  }

 private:
  void normalize() {
    // trim zero rows/columns at the high end
    while (nx_ > 0) {
      bool zero = true;
      for (long j = 0; j < ny_ && zero; ++j) zero = coeff(nx_ - 1, j) == S(0);
      if (!zero) break;
      c_.resize(static_cast<std::size_t>((nx_ - 1) * ny_));
      --nx_;
    }
    while (ny_ > 0 && nx_ > 0) {
      bool zero = true;
      for (long i = 0; i < nx_ && zero; ++i) zero = coeff(i, ny_ - 1) == S(0);
      if (!zero) break;
      std::vector<S> v(static_cast<std::size_t>(nx_ * (ny_ - 1)));
      for (long i = 0; i < nx_; ++i)
        for (long j = 0; j < ny_ - 1; ++j) v[static_cast<std::size_t>(i * (ny_ - 1) + j)] = coeff(i, j);
      c_ = std::move(v);
      --ny_;
    }
    if (nx_ == 0 || ny_ == 0) {
      nx_ = ny_ = 0;
      c_.clear();
    }
  }

  long nx_ = 0, ny_ = 0;
  std::vector<S> c_;  // row-major, index i*ny_ + j for x^i y^j
};

using Poly1 = Poly1T<ExactScalar>;
using Poly2 = Poly2T<ExactScalar>;
using Poly1d = Poly1T<double>;
using Poly2d = Poly2T<double>;

/// Converts exact polynomials to double-coefficient ones for fast evaluation.
inline Poly1d to_double_poly(const Poly1& p) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(p.degree() + 1));
  for (long i = 0; i <= p.degree(); ++i) v.push_back(to_double(p.coeff(i)));
  return Poly1d(std::move(v));
}
inline Poly2d to_double_poly(const Poly2& p) {
  Poly2d out;
  for (long i = 0; i <= p.x_degree(); ++i)
    for (long j = 0; j <= p.y_degree(); ++j) {
      double c = to_double(p.coeff(i, j));
      if (c != 0.0) out = out + Poly2d::monomial(i, j, c);
    }
  return out;
}

// JSON serialization (exact coefficients as numerator/denominator string pairs).
std::string poly1_to_json(const Poly1& p);
std::string poly2_to_json(const Poly2& p);
Poly1 poly1_from_json(const std::string& text);
Poly2 poly2_from_json(const std::string& text);

}  // namespace qmehler
