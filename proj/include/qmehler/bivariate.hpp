#pragma once

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qmehler/kernels.hpp"
#include "qmehler/polyalg.hpp"

namespace qmehler {

/// gamma_{i,j}(x,y|rho,q) = sum_n rho^n/[n]_q! H_{n+i}(x|q) H_{n+j}(y|q),
/// summed adaptively; requires |rho| < 1 and x, y in S(q).
double gamma_series(long i, long j, const KernelParams& p, const TruncationPolicy& policy = {});

/// Record form of the same series (the object the identity checks reason about).
struct GammaSeries {
  long i = 0;
  long j = 0;
  KernelParams params;
  TruncationPolicy policy;

  double value() const { return gamma_series(i, j, params, policy); }
};

/// Product form of gamma_{0,0}: (rho^2)_inf / prod_j omega(.|rho q^j).
double pm_product(const KernelParams& p, const TruncationPolicy& policy = {});

/// omega(x sqrt(1-q)/2, y sqrt(1-q)/2 | t) as an exact polynomial in (x, y).
Poly2 omega_scaled_poly2(const ExactScalar& t, const ExactScalar& q);

/// P_n(x|y,rho,q) as an exact bivariate polynomial (y enters the recurrence).
Poly2 asc_p_poly2(long n, const ExactScalar& rho, const ExactScalar& q);

/// Q_{i,j}(x,y|rho,q), exact, via the finite Al-Salam-Chihara expansion
/// sum_{s=0..j} (-1)^s q^C(s,2) [j s]_q rho^s H_{j-s}(y|q) P_{i+s}(x|y,rho,q)/(rho^2)_{i+s}.
Poly2 q_poly(long i, long j, const ExactScalar& rho, const ExactScalar& q);

/// Point evaluation of Q_{i,j} in doubles (same expansion, scalar recurrences).
double q_poly_value(long i, long j, double x, double y, double rho, double q);

/// Values of every Q_{i,j} with i+j <= level_cap at one point, sharing one set
/// of recurrences; ordered by total degree d, then ascending i (index
/// d(d+1)/2 + i holds Q_{i,d-i}).
std::vector<double> q_poly_values_upto(long level_cap, double x, double y, double rho, double q);

/// Classical q = 1 closed form
/// Q_{i,j}(x,y|rho,1) = sum_k (-1)^k C(j,k) rho^k He_{j-k}(y) He_{k+i}(u) / (1-rho^2)^{(k+i)/2},
/// u = (x - rho y)/sqrt(1-rho^2).
double q_poly_value_q1(long i, long j, double x, double y, double rho);

/// Exact table of Q_{i,j} for all i+j <= max_total_degree at fixed rational (rho, q).
class QPolyTable {
 public:
  QPolyTable(ExactScalar rho, ExactScalar q, long max_total_degree);

  const Poly2& at(long i, long j) const;
  long max_total_degree() const { return max_degree_; }
  const ExactScalar& rho() const { return rho_; }
  const ExactScalar& q() const { return q_; }

  /// JSON export with exact coefficients as numerator/denominator string pairs.
  std::string to_json() const;

 private:
  ExactScalar rho_, q_;
  long max_degree_;
  std::map<std::pair<long, long>, Poly2> table_;
};

/// Pass/fail record for residual-mode identity checks.
struct ResidualReport {
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  long points = 0;
};

/// max over an interior grid of |gamma_{i,j} - Q_{i,j} gamma_{0,0}|.
ResidualReport verify_upm(long i, long j, double rho, double q, double tolerance,
                          const TruncationPolicy& policy = {}, int grid_per_axis = 5);

/// sigma_n(rho q^m) vs sum_k (-1)^k [m k]_q q^C(k,2) (1-q)^k rho^k sigma_{n+k}(rho)
/// for a caller-supplied sequence sigma(index, rho).
ResidualReport shifted_rho_identity(long n, long m,
                                    const std::function<double(long, double)>& sigma, double rho,
                                    double q, double tolerance = 1e-8);

/// Exact aligned-truncation form of the same identity with sigma = gamma rows:
/// truncating sigma_{n+k} after order-k terms makes both sides identical finite
/// polynomials; checked coefficient-by-coefficient over the rationals.
bool pomoc_exact(long i, long j, long m, long order, const ExactScalar& rho, const ExactScalar& q);

/// Truncated sum_k (-1)^k q^C(k,2) rho^k/(q)_k gamma_{i+k,j+k}; converges to H_i(x)H_j(y).
double hermite_product_series(long i, long j, const KernelParams& p,
                              const TruncationPolicy& policy = {});

/// Exact polynomial identity Q_{i,j}(.|rho q^m, q) * prod_{t<m} omega_scaled(rho q^t)
/// == (rho^2)_{2m} sum_k (-1)^k [m k]_q q^C(k,2) (1-q)^k rho^k Q_{i+k,j+k}(.|rho,q).
/// On mismatch returns false and, if diff != nullptr, stores a coefficient diff note.
bool q_shift_identity(long i, long j, long m, const ExactScalar& rho, const ExactScalar& q,
                      std::string* diff = nullptr);

/// Exact identity prod_{j<n} omega_scaled(rho q^j)
/// == (rho^2)_{2n} sum_k (-1)^k [n k]_q q^C(k,2) (1-q)^k rho^k Q_{k,k}.
bool omega_product_identity(long n, const ExactScalar& rho, const ExactScalar& q,
                            std::string* diff = nullptr);

/// Exact inversion q^C(n,2) rho^n (1-q)^n Q_{n,n}
/// == sum_k (-1)^k q^C(n-k,2) [n k]_q prod_{j<k} omega_scaled(rho q^j) / (rho^2)_{2k}.
/// rho = 0 is rejected (the left normalization degenerates).
bool qkk_inversion(long n, const ExactScalar& rho, const ExactScalar& q,
                   std::string* diff = nullptr);

/// Closed-form inner product (j,k) entry of the level-n Gram matrix
/// int int Q_{n-j,j} Q_{n-k,k} f_2D dx dy (Proposition-style finite sum).
template <RingScalar S>
S gram_entry(long n, long j, long k, const S& rho, const S& q) {
  if (j > k) std::swap(j, k);
  if (j < 0 || k > n) throw DomainError("gram_entry requires 0 <= j, k <= n");
  if (detail::approx_abs(rho) >= 1.0) throw DomainError("gram_entry requires |rho| < 1");
  S pref = int_pow(S(-1), k - j) * int_pow(rho, k - j) * int_pow(q, choose2(k - j)) *
           q_factorial(j, q) * q_factorial(n - j, q) / q_pochhammer(rho * rho, q, n);
  S sum(0);
  for (long s = 0; s <= j; ++s) {
    S term = int_pow(q, s * (s - 1) + n * s) * q_binomial(k, k - j + s, q) *
             q_binomial(n - j + s, s, q) * int_pow(rho, 2 * s) *
             q_pochhammer(rho * rho * int_pow(q, n - j + s), q, j - s);
    sum = sum + term;
  }
  return pref * sum;
}

/// Level-n Gram matrix of {Q_{n-j,j}} under f_2D, from the closed form.
struct GramMatrix {
  long level = 0;
  Eigen::MatrixXd entries;
};
GramMatrix gram_matrix(long n, double rho, double q);

/// Lower-triangular B with B G B^T = I (Cholesky-based Gram-Schmidt in
/// increasing j with positive diagonal); rows give an orthonormal basis of
/// Lambda_n in the Q_{n-j,j} coordinates. Throws NumericalError if G is not
/// numerically positive definite.
Eigen::MatrixXd gram_schmidt_basis(const GramMatrix& gram);
Eigen::MatrixXd gram_schmidt_basis(long n, double rho, double q);

/// Residual of the bivariate generating-function identity: truncated
/// sum_{n,m} t^n s^m/([n]_q![m]_q!) Q_{n,m} against
/// f_bN(x|t,q) f_bN(y|s,q) / f_2D * sum_k rho^k/[k]_q! H_k(x|t,q) H_k(y|s,q).
ResidualReport q_generating_function_check(double s, double t, const KernelParams& p,
                                           const TruncationPolicy& policy = {},
                                           double tolerance = 1e-7);

/// Partial sum sum_{k<=N} (-1)^k q^C(k,2) rho^k/[k]_q! Q_{k,k}(x,y|rho,q);
/// converges to 1/gamma_{0,0}. At q = 1 requires |rho| < 1/2.
double reciprocal_series(double x, double y, double rho, double q, long n_terms);

/// Same sum with the adaptive stopping rule of the policy.
double reciprocal_series_adaptive(double x, double y, double rho, double q,
                                  const TruncationPolicy& policy = {});

/// |H_i H_j prod omega/(rho^2)_inf - sum_k (-1)^k q^C(k,2) rho^k/[k]_q! Q_{i+k,j+k}|.
double theorem_main_residual(long i, long j, const KernelParams& p,
                             const TruncationPolicy& policy = {});

}  // namespace qmehler
