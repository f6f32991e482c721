#pragma once

#include "qmehler/families.hpp"
#include "qmehler/qarith.hpp"
#include "qmehler/truncation.hpp"

namespace qmehler {

/// Validated (x, y, rho, q) tuple for the kernel/density layer.
/// |rho| < 1 always; paths through infinite products additionally need |q| < 1.
/// Densities return 0 outside S(q) instead of throwing (indicator convention).
struct KernelParams {
  double x = 0.0;
  double y = 0.0;
  double rho = 0.0;
  double q = 0.0;

  void validate() const {
    require_q_param(q);
    if (!(std::fabs(rho) < 1.0)) throw DomainError("KernelParams requires |rho| < 1");
  }
  void validate_products() const {
    validate();
    if (!(std::fabs(q) < 1.0)) throw DomainError("infinite products require |q| < 1");
  }
};

/// v(x|t) = 1 - 2xt + t^2; nonnegative for x in [-1,1], strictly positive inside.
template <RingScalar S>
S v_poly(const S& x, const S& t) {
  return S(1) - S(2) * x * t + t * t;
}

/// l(x|a) = (1+a)^2 - 4a x^2.
template <RingScalar S>
S l_poly(const S& x, const S& a) {
  return (S(1) + a) * (S(1) + a) - S(4) * a * x * x;
}

/// omega(x,y|rho) = (1-rho^2)^2 - 4 rho (1+rho^2) x y + 4 rho^2 (x^2+y^2).
/// Factors as v(cos(s+t)|rho) v(cos(s-t)|rho) for x = cos s, y = cos t.
template <RingScalar S>
S omega_poly(const S& x, const S& y, const S& rho) {
  S r2 = rho * rho;
  return (S(1) - r2) * (S(1) - r2) - S(4) * rho * (S(1) + r2) * x * y + S(4) * r2 * (x * x + y * y);
}

// --- log-space building blocks (all factors positive on the stated domains) ---

/// sum_{j>=0} log v(xhat | t0 q^j); xhat must lie in (-1, 1), |q| < 1.
TruncatedValue log_v_product(double xhat, double t0, double q, const TruncationPolicy& policy = {});

/// sum_{j>=0} [log(1 - rho^2 q^j) - log omega(xhat, yhat | rho q^j)];
/// exp of this is the Poisson-Mehler kernel (rho^2)_inf / prod omega.
TruncatedValue log_cn_ratio(double xhat, double yhat, double rho, double q,
                            const TruncationPolicy& policy = {});

// --- generating functions ---

/// phi_H(x|rho,q) = sum rho^n/[n]_q! H_n(x|q) = 1 / prod_j v(x sqrt(1-q)/2 | rho q^j sqrt(1-q)).
/// Product form; requires |rho(1-q)| < 1, |q| < 1, x in S(q).
double phi_H(double x, double rho, double q, const TruncationPolicy& policy = {});
double log_phi_H(double x, double rho, double q, const TruncationPolicy& policy = {});

/// Truncated series form of phi_H (dual-representation oracle); also valid at q = 1,
/// where it reduces to the classical exp(rho x - rho^2/2).
double phi_H_series(double x, double rho, double q, const TruncationPolicy& policy = {});

/// phi_P(x|y,rho,t,q) = sum t^n/[n]_q! P_n = prod_j v(yhat|rho t q^j s)/v(xhat|t q^j s), s = sqrt(1-q).
/// Requires |t sqrt(1-q)| < 1, |rho| < 1, x,y in S(q), |q| < 1.
double phi_P(double x, double y, double rho, double t, double q, const TruncationPolicy& policy = {});
double phi_P_series(double x, double y, double rho, double t, double q,
                    const TruncationPolicy& policy = {});

/// eta_n(x|t,q) = sum_j t^j/[j]_q! H_{j+n}(x|q); requires (1-q) t^2 < 1, x in S(q).
/// Equals H_n(x|t,q) phi_H(x|t,q) (shifted generating function).
double eta_n(long n, double x, double t, double q, const TruncationPolicy& policy = {});

/// Product-form right-hand side H_n(x|t,q) * phi_H(x|t,q), used as the oracle.
double eta_n_product(long n, double x, double t, double q, const TruncationPolicy& policy = {});

// --- densities ---

/// q-Normal density f_N(x|q); 0 outside S(q); DomainError for |q| >= 1.
double f_N(double x, double q, const TruncationPolicy& policy = {});
/// log f_N; -inf outside S(q).
double log_f_N(double x, double q, const TruncationPolicy& policy = {});

/// Big q-Hermite weight f_bN(x|a,q) = f_N(x|q) phi_H(x|a,q); needs |a(1-q)| < 1.
double f_bN(double x, double a, double q, const TruncationPolicy& policy = {});

/// Conditional density f_CN(x|y,rho,q) = f_N(x|q) (rho^2)_inf / prod_j omega(...|rho q^j).
/// 0 for x outside S(q); y must lie in S(q).
double f_CN(double x, double y, double rho, double q, const TruncationPolicy& policy = {});
double log_f_CN(double x, double y, double rho, double q, const TruncationPolicy& policy = {});

/// Bivariate density f_2D(x,y|rho,q) = f_CN(x|y,rho,q) f_N(y|q); 0 outside S(q)^2.
double f_2D(double x, double y, double rho, double q, const TruncationPolicy& policy = {});
double log_f_2D(double x, double y, double rho, double q, const TruncationPolicy& policy = {});

}  // namespace qmehler
