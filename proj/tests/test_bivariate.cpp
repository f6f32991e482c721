#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qmehler/bivariate.hpp"
#include "qmehler/quadrature.hpp"

using namespace qmehler;

namespace {
const TruncationPolicy kTight{1e-12, 100000, false};

Poly2 hermite_product(long i, long j, const ExactScalar& q) {
  return Poly2::from_poly_in_x(hermite_q_coeffs(i, q)) *
         Poly2::from_poly_in_y(hermite_q_coeffs(j, q));
}
}  // namespace

TEST_CASE("gamma series: trivial rho = 0 and Poisson-Mehler factorization") {
  KernelParams zero{0.7, -0.4, 0.0, 0.5};
  CHECK(gamma_series(0, 0, zero, kTight) == doctest::Approx(1.0));
  CHECK(gamma_series(2, 1, zero, kTight) ==
        doctest::Approx(hermite_q(2, 0.7, 0.5) * hermite_q(1, -0.4, 0.5)));

  // gamma_{0,0} = (rho^2)_inf / prod omega on a small sample
  for (double q : {-0.5, 0.0, 0.3, 0.9})
    for (double rho : {0.2, 0.6}) {
      SupportInterval s(q);
      for (double xf : {-0.6, 0.3})
        for (double yf : {0.5, -0.2}) {
          KernelParams p{s.at_fraction(xf), s.at_fraction(yf), rho, q};
          CHECK(std::fabs(gamma_series(0, 0, p, kTight) - pm_product(p, kTight)) < 1e-8);
        }
    }
  CHECK_THROWS_AS(gamma_series(0, 0, KernelParams{100.0, 0.0, 0.3, 0.5}, kTight), DomainError);
}

TEST_CASE("gamma_{1,0} = Q_{1,0} gamma_{0,0} with Q_{1,0} = (x - rho y)/(1 - rho^2)") {
  KernelParams p{0.5, -0.3, 0.4, 0.5};
  double q10 = (p.x - p.rho * p.y) / (1.0 - p.rho * p.rho);
  CHECK(std::fabs(gamma_series(1, 0, p, kTight) - q10 * gamma_series(0, 0, p, kTight)) < 1e-8);
  CHECK(q_poly_value(1, 0, p.x, p.y, p.rho, p.q) == doctest::Approx(q10).epsilon(1e-14));
}

TEST_CASE("GammaSeries record") {
  GammaSeries g{1, 2, {0.4, 0.1, 0.3, 0.5}, kTight};
  CHECK(g.value() == doctest::Approx(gamma_series(1, 2, g.params, kTight)));
}

TEST_CASE("q_poly: base cases") {
  ExactScalar rho(1, 3), q(1, 2);
  CHECK(q_poly(0, 0, rho, q) == Poly2(ExactScalar(1)));
  // Q_{k,0} = P_k / (rho^2)_k
  for (long k = 0; k <= 6; ++k) {
    Poly2 expected = asc_p_poly2(k, rho, q) / q_pochhammer(rho * rho, q, k);
    CHECK(q_poly(k, 0, rho, q) == expected);
  }
  // rho = 0 reduces to a product of q-Hermites
  for (long i = 0; i <= 4; ++i)
    for (long j = 0; j <= 4; ++j)
      CHECK(q_poly(i, j, ExactScalar(0), q) == hermite_product(i, j, q));
}

TEST_CASE("q_poly: exact symmetry and total degree") {
  for (const auto& [rho, q] : std::vector<std::pair<ExactScalar, ExactScalar>>{
           {ExactScalar(1, 3), ExactScalar(1, 2)},
           {ExactScalar(2, 5), ExactScalar(-1, 2)},
           {ExactScalar(1, 4), ExactScalar(3, 4)}}) {
    for (long i = 0; i + 0 <= 8; ++i)
      for (long j = 0; i + j <= 8; ++j) {
        Poly2 qij = q_poly(i, j, rho, q);
        CHECK(qij.total_degree() == i + j);
        CHECK(qij.swapped_variables() == q_poly(j, i, rho, q));
      }
  }
}

TEST_CASE("q_poly_value agrees with the exact construction") {
  ExactScalar rho(2, 5), q(1, 2);
  for (long i = 0; i <= 4; ++i)
    for (long j = 0; j <= 4; ++j) {
      Poly2d pd = to_double_poly(q_poly(i, j, rho, q));
      for (double x : {-1.2, 0.4})
        for (double y : {0.8, -0.5}) {
          double direct = q_poly_value(i, j, x, y, 0.4, 0.5);
          CHECK(direct == doctest::Approx(pd.eval(x, y)).epsilon(1e-11));
        }
    }
  // CLI worked example: (x - rho y)/(1 - rho^2) at (1, 0), rho = q = 1/2
  CHECK(q_poly(1, 0, ExactScalar(1, 2), ExactScalar(1, 2)).eval(ExactScalar(1), ExactScalar(0)) ==
        ExactScalar(4, 3));
  CHECK(q_poly_value(1, 0, 1.0, 0.0, 0.5, 0.5) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("q_poly_values_upto packs engine output consistently") {
  auto vals = q_poly_values_upto(4, 0.3, -0.6, 0.4, 0.5);
  std::size_t flat = 0;
  for (long d = 0; d <= 4; ++d)
    for (long i = 0; i <= d; ++i)
      CHECK(vals[flat++] == doctest::Approx(q_poly_value(i, d - i, 0.3, -0.6, 0.4, 0.5)));
}

TEST_CASE("verify_upm residuals") {
  auto zero = verify_upm(0, 0, 0.4, 0.5, 1e-12, kTight);
  CHECK(zero.max_residual == 0.0);  // identically gamma - 1 * gamma
  CHECK(zero.pass);
  auto one = verify_upm(1, 0, 0.4, 0.5, 1e-8, kTight);
  CHECK(one.pass);
  auto deep = verify_upm(2, 3, 0.4, 0.5, 1e-7, kTight);
  CHECK(deep.pass);
}

TEST_CASE("shifted rho identity: trivial, q = 1, and gamma rows") {
  auto sigma_const = [](long, double rho) { return std::exp(rho); };
  auto trivial = shifted_rho_identity(3, 0, sigma_const, 0.4, 0.5, 1e-12);
  CHECK(trivial.max_residual == 0.0);

  // q = 1: the right side telescopes to sigma_n(rho) itself
  auto gamma_q1 = [&](long k, double rho) {
    return gamma_series(1 + k, 1 + k, KernelParams{0.5, -0.3, rho, 1.0}, kTight);
  };
  auto at_one = shifted_rho_identity(0, 2, gamma_q1, 0.3, 1.0, 1e-10);
  CHECK(at_one.pass);

  auto gamma_row = [&](long k, double rho) {
    return gamma_series(1 + k, 1 + k, KernelParams{0.5, -0.3, rho, 0.5}, kTight);
  };
  auto report = shifted_rho_identity(0, 2, gamma_row, 0.3, 0.5, 1e-8);
  CHECK(report.pass);
}

TEST_CASE("pomoc identity in exact aligned-truncation form") {
  ExactScalar rho(1, 3), q(1, 2);
  CHECK(pomoc_exact(0, 0, 0, 4, rho, q));  // m = 0 is sigma_n(rho) = sigma_n(rho)
  CHECK(pomoc_exact(1, 1, 2, 8, rho, q));
  CHECK(pomoc_exact(2, 0, 3, 8, rho, q));
  CHECK(pomoc_exact(1, 2, 2, 6, ExactScalar(1, 4), ExactScalar(-1, 2)));
}

TEST_CASE("hermite product series recovers H_i H_j") {
  // rho = 0: only the k = 0, n = 0 term survives
  KernelParams zero{0.5, 0.5, 0.0, 0.5};
  CHECK(hermite_product_series(1, 2, zero, kTight) ==
        doctest::Approx(hermite_q(1, 0.5, 0.5) * hermite_q(2, 0.5, 0.5)));
  KernelParams p{0.5, 0.5, 0.3, 0.5};
  CHECK(std::fabs(hermite_product_series(0, 0, p, kTight) - 1.0) < 1e-8);
  double expected = hermite_q(1, 0.5, 0.5) * hermite_q(2, 0.5, 0.5);
  CHECK(std::fabs(hermite_product_series(1, 2, p, kTight) - expected) < 1e-7);
}

TEST_CASE("QnaQ shift identity, exact") {
  CHECK(q_shift_identity(2, 1, 0, ExactScalar(1, 3), ExactScalar(1, 2)));  // m = 0 trivial
  CHECK(q_shift_identity(0, 0, 1, ExactScalar(1, 3), ExactScalar(1, 2)));
  CHECK(q_shift_identity(1, 1, 2, ExactScalar(1, 4), ExactScalar(2, 3)));
  CHECK(q_shift_identity(2, 0, 2, ExactScalar(2, 5), ExactScalar(-1, 2)));
  std::string diff;
  CHECK(q_shift_identity(1, 0, 1, ExactScalar(1, 5), ExactScalar(3, 4), &diff));
  CHECK(diff.empty());
}

TEST_CASE("omega product identity, exact") {
  CHECK(omega_product_identity(0, ExactScalar(1, 3), ExactScalar(1, 2)));
  CHECK(omega_product_identity(1, ExactScalar(1, 3), ExactScalar(1, 2)));
  CHECK(omega_product_identity(3, ExactScalar(1, 5), ExactScalar(3, 4)));
  CHECK(omega_product_identity(2, ExactScalar(1, 4), ExactScalar(-1, 3)));
}

TEST_CASE("qkk inversion, exact") {
  CHECK(qkk_inversion(0, ExactScalar(1, 3), ExactScalar(1, 2)));
  CHECK(qkk_inversion(1, ExactScalar(1, 3), ExactScalar(1, 2)));
  CHECK(qkk_inversion(2, ExactScalar(1, 4), ExactScalar(1, 3)));
  CHECK(qkk_inversion(3, ExactScalar(2, 5), ExactScalar(2, 3)));
  CHECK_THROWS_AS(qkk_inversion(2, ExactScalar(0), ExactScalar(1, 2)), DomainError);
}

TEST_CASE("gram_entry closed form") {
  // level 0: density normalization
  CHECK(gram_entry<double>(0, 0, 0, 0.4, 0.5) == doctest::Approx(1.0));
  // (1,0,0): [1]_q!/(rho^2)_1 = 1/(1-rho^2)
  CHECK(gram_entry<double>(1, 0, 0, 0.4, 0.5) == doctest::Approx(1.0 / 0.84));
  CHECK(gram_entry<ExactScalar>(1, 0, 0, ExactScalar(2, 5), ExactScalar(1, 2)) ==
        ExactScalar(25, 21));
  // symmetry in (j, k)
  CHECK(gram_entry<double>(3, 1, 2, 0.4, 0.5) == gram_entry<double>(3, 2, 1, 0.4, 0.5));
  // exact and floating evaluations agree
  for (long n = 0; n <= 4; ++n)
    for (long j = 0; j <= n; ++j)
      for (long k = j; k <= n; ++k) {
        double exact =
            to_double(gram_entry<ExactScalar>(n, j, k, ExactScalar(2, 5), ExactScalar(1, 2)));
        CHECK(gram_entry<double>(n, j, k, 0.4, 0.5) == doctest::Approx(exact).epsilon(1e-12));
      }
  CHECK_THROWS_AS(gram_entry<double>(2, 0, 3, 0.4, 0.5), DomainError);
}

TEST_CASE("gram_entry matches 2-D quadrature at level 1") {
  double rho = 0.4, q = 0.5;
  TruncationPolicy tight{1e-13, 100000, false};
  QuadratureRule rule;
  rule.nodes = 128;
  rule.target_error = 1e-9;
  for (long j = 0; j <= 1; ++j)
    for (long k = 0; k <= 1; ++k) {
      auto quad = integrate_2d(
          [&](double x, double y) {
            return q_poly_value(1 - j, j, x, y, rho, q) * q_poly_value(1 - k, k, x, y, rho, q) *
                   f_2D(x, y, rho, q, tight);
          },
          q, rule);
      CHECK(std::fabs(quad.value - gram_entry<double>(1, j, k, rho, q)) < 1e-6);
    }
}

TEST_CASE("gram matrix: diagonal at rho = 0, symmetry, positive definiteness") {
  GramMatrix diag = gram_matrix(3, 0.0, 0.5);
  for (long j = 0; j <= 3; ++j)
    for (long k = 0; k <= 3; ++k) {
      double expected = (j == k) ? q_factorial<double>(3 - j, 0.5) * q_factorial<double>(j, 0.5) : 0.0;
      CHECK(diag.entries(j, k) == doctest::Approx(expected).epsilon(1e-13));
    }
  GramMatrix g = gram_matrix(4, 0.6, 0.3);
  CHECK((g.entries - g.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_NOTHROW(gram_schmidt_basis(g));  // Cholesky succeeds: positive definite
}

TEST_CASE("gram-schmidt basis orthonormalizes") {
  Eigen::MatrixXd b0 = gram_schmidt_basis(0, 0.4, 0.5);
  CHECK(b0.rows() == 1);
  CHECK(b0(0, 0) == doctest::Approx(1.0));

  // rho = 0: B is diagonal with entries ([n-j]_q! [j]_q!)^{-1/2}
  Eigen::MatrixXd bdiag = gram_schmidt_basis(3, 0.0, 0.5);
  for (long j = 0; j <= 3; ++j) {
    double expected = 1.0 / std::sqrt(q_factorial<double>(3 - j, 0.5) * q_factorial<double>(j, 0.5));
    CHECK(bdiag(j, j) == doctest::Approx(expected).epsilon(1e-12));
    for (long k = j + 1; k <= 3; ++k) CHECK(std::fabs(bdiag(j, k)) < 1e-14);
  }

  GramMatrix g = gram_matrix(2, 0.4, 0.5);
  Eigen::MatrixXd b = gram_schmidt_basis(g);
  Eigen::MatrixXd res = b * g.entries * b.transpose() - Eigen::MatrixXd::Identity(3, 3);
  CHECK(res.cwiseAbs().maxCoeff() < 1e-10);
  // strictly lower-triangular with positive diagonal
  for (long j = 0; j <= 2; ++j) {
    CHECK(b(j, j) > 0.0);
    for (long k = j + 1; k <= 2; ++k) CHECK(b(j, k) == 0.0);
  }

  GramMatrix broken;
  broken.level = 1;
  broken.entries = Eigen::MatrixXd(2, 2);
  broken.entries << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(gram_schmidt_basis(broken), NumericalError);
}

TEST_CASE("generating-function identity of the Q family") {
  // s = t = 0: both sides are 1
  auto trivial = q_generating_function_check(0.0, 0.0, KernelParams{0.4, -0.2, 0.3, 0.5}, kTight, 1e-8);
  CHECK(trivial.pass);
  // rho = 0: left side factors into shifted generating functions
  auto rho0 = q_generating_function_check(0.15, 0.2, KernelParams{0.4, -0.2, 0.0, 0.5}, kTight, 1e-8);
  CHECK(rho0.pass);
  auto generic =
      q_generating_function_check(0.2, 0.25, KernelParams{0.3, -0.4, 0.4, 0.5}, kTight, 1e-7);
  CHECK(generic.pass);
}

TEST_CASE("reciprocal series") {
  CHECK(reciprocal_series(0.4, -0.7, 0.0, 0.5, 0) == doctest::Approx(1.0));
  double r = reciprocal_series_adaptive(0.5, -0.3, 0.3, 0.5, kTight);
  double g00 = gamma_series(0, 0, KernelParams{0.5, -0.3, 0.3, 0.5}, kTight);
  CHECK(std::fabs(r * g00 - 1.0) < 1e-7);
  // fixed-order partial sums approach the adaptive value
  double r10 = reciprocal_series(0.5, -0.3, 0.3, 0.5, 10);
  double r30 = reciprocal_series(0.5, -0.3, 0.3, 0.5, 30);
  CHECK(std::fabs(r30 - r) < std::fabs(r10 - r) + 1e-14);
  CHECK_THROWS_AS(reciprocal_series(0.5, -0.3, 0.3, 0.5, -1), DomainError);
}

TEST_CASE("reciprocal series at q = 1 (classical probe, |rho| < 1/2)") {
  double x = 0.5, y = -0.3, rho = 0.3;
  double r = reciprocal_series_adaptive(x, y, rho, 1.0, kTight);
  double g00 = gamma_series(0, 0, KernelParams{x, y, rho, 1.0}, kTight);
  CHECK(std::fabs(r * g00 - 1.0) < 1e-6);
  // the classical Mehler kernel gives an independent 1/gamma_{0,0}
  double mehler = std::exp((2.0 * rho * x * y - rho * rho * (x * x + y * y)) /
                           (2.0 * (1.0 - rho * rho))) /
                  std::sqrt(1.0 - rho * rho);
  CHECK(std::fabs(r - 1.0 / mehler) < 1e-6);
  CHECK_THROWS_AS(reciprocal_series(0.5, -0.3, 0.6, 1.0, 10), DomainError);
}

TEST_CASE("theorem-main generalization for (i,j) = (1,1)") {
  KernelParams p{0.5, -0.3, 0.4, 0.5};
  CHECK(theorem_main_residual(1, 1, p, kTight) < 1e-7);
  CHECK(theorem_main_residual(0, 0, p, kTight) < 1e-7);
}

TEST_CASE("classical q = 1 closed form matches q_poly at q = 1") {
  for (const ExactScalar& rho_exact : {ExactScalar(1, 5), ExactScalar(2, 5)}) {
    double rho = to_double(rho_exact);
    for (long i = 0; i + 0 <= 4; ++i)
      for (long j = 0; i + j <= 4; ++j) {
        Poly2d pd = to_double_poly(q_poly(i, j, rho_exact, ExactScalar(1)));
        for (double x : {-0.8, 0.5})
          for (double y : {0.3, -1.1}) {
            double classical = q_poly_value_q1(i, j, x, y, rho);
            CHECK(std::fabs(pd.eval(x, y) - classical) <=
                  1e-10 * std::max(1.0, std::fabs(classical)));
          }
      }
  }
}

TEST_CASE("QPolyTable: construction, lookup, export") {
  QPolyTable table(ExactScalar(1, 3), ExactScalar(1, 2), 4);
  CHECK(table.max_total_degree() == 4);
  CHECK(table.at(0, 0) == Poly2(ExactScalar(1)));
  CHECK(table.at(2, 2) == q_poly(2, 2, ExactScalar(1, 3), ExactScalar(1, 2)));
  CHECK(table.at(1, 3).swapped_variables() == table.at(3, 1));
  CHECK_THROWS_AS(table.at(4, 1), std::out_of_range);
  std::string json = table.to_json();
  CHECK(json.find("\"rho\": \"1/3\"") != std::string::npos);
  CHECK(json.find("\"max_total_degree\": 4") != std::string::npos);
}
