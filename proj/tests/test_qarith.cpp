#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qmehler/qarith.hpp"

using namespace qmehler;

namespace {
const std::vector<ExactScalar> kRationalQs = {
    ExactScalar(-1, 2), ExactScalar(-1, 3), ExactScalar(1, 5),
    ExactScalar(1, 2),  ExactScalar(2, 3),  ExactScalar(9, 10)};
}

TEST_CASE("q_number basics") {
  CHECK(q_number(0, ExactScalar(1, 2)) == 0);
  CHECK(q_number(0, 0.37) == 0.0);
  // [n]_1 = n
  for (long n = 0; n <= 10; ++n) CHECK(q_number(n, ExactScalar(1)) == n);
  // direct evaluation of 1 + q + q^2 at q = 1/2
  CHECK(q_number(3, ExactScalar(1, 2)) == ExactScalar(7, 4));
  // [n]_0 = 1 for n >= 1, 0 for n = 0
  CHECK(q_number(0, ExactScalar(0)) == 0);
  CHECK(q_number(5, ExactScalar(0)) == 1);
}

TEST_CASE("q_factorial basics") {
  CHECK(q_factorial(0, ExactScalar(2, 3)) == 1);
  CHECK(q_factorial(3, ExactScalar(1)) == 6);
  // 1 * 3/2 * 7/4
  CHECK(q_factorial(3, ExactScalar(1, 2)) == ExactScalar(21, 8));
  CHECK(q_factorial(7, ExactScalar(0)) == 1);
  // definition as a product of q-numbers
  for (const auto& q : kRationalQs)
    for (long n = 0; n <= 8; ++n) {
      ExactScalar prod(1);
      for (long j = 1; j <= n; ++j) prod *= q_number(j, q);
      CHECK(q_factorial(n, q) == prod);
    }
}

TEST_CASE("q_binomial special values and out-of-range zeros") {
  for (long n = 0; n <= 8; ++n)
    for (long k = 0; k <= n; ++k) CHECK(q_binomial(n, k, ExactScalar(1)) == binomial<ExactScalar>(n, k));
  CHECK(q_binomial(2, 5, ExactScalar(1, 3)) == 0);
  CHECK(q_binomial(3, -1, ExactScalar(1, 3)) == 0);
  // Gaussian binomial [4 2]_q = 1 + q + 2q^2 + q^3 + q^4 at q = 1/2
  CHECK(q_binomial(4, 2, ExactScalar(1, 2)) == ExactScalar(35, 16));
  // [n k]_0 = 1 for n >= k >= 0
  CHECK(q_binomial(6, 2, ExactScalar(0)) == 1);
}

TEST_CASE("q_binomial symmetry and Pascal recurrence, exact") {
  for (const auto& q : kRationalQs)
    for (long n = 0; n <= 20; ++n)
      for (long k = 0; k <= n; ++k) {
        CHECK(q_binomial(n, k, q) == q_binomial(n, n - k, q));
        if (k >= 1)
          CHECK(q_binomial(n, k, q) ==
                q_binomial(n - 1, k - 1, q) + int_pow(q, k) * q_binomial(n - 1, k, q));
      }
}

TEST_CASE("q-binomial equals factorial quotient") {
  for (const auto& q : kRationalQs)
    for (long n = 0; n <= 12; ++n)
      for (long k = 0; k <= n; ++k)
        CHECK(q_binomial(n, k, q) ==
              q_factorial(n, q) / (q_factorial(n - k, q) * q_factorial(k, q)));
}

TEST_CASE("q_pochhammer basics and additivity") {
  CHECK(q_pochhammer(ExactScalar(3, 7), ExactScalar(1, 3), 0) == 1);
  // (a;1)_n = (1-a)^n
  CHECK(q_pochhammer(ExactScalar(1, 4), ExactScalar(1), 3) == int_pow(ExactScalar(3, 4), 3));
  // (1-1/2)(1-1/4)
  CHECK(q_pochhammer(ExactScalar(1, 2), ExactScalar(1, 2), 2) == ExactScalar(3, 8));
  // (a;0)_n = 1-a for n >= 1
  CHECK(q_pochhammer(ExactScalar(2, 5), ExactScalar(0), 4) == ExactScalar(3, 5));
  // splitting rule (a)_{n+m} = (a)_n (a q^n)_m
  for (const auto& q : kRationalQs)
    for (long n = 0; n <= 6; ++n)
      for (long m = 0; m <= 6; ++m) {
        ExactScalar a(2, 7);
        CHECK(q_pochhammer(a, q, n + m) ==
              q_pochhammer(a, q, n) * q_pochhammer(a * int_pow(q, n), q, m));
      }
}

TEST_CASE("(q)_n = (1-q)^n [n]_q!") {
  for (const auto& q : kRationalQs)
    for (long n = 0; n <= 20; ++n)
      CHECK(q_pochhammer(q, q, n) == int_pow(ExactScalar(1) - q, n) * q_factorial(n, q));
}

TEST_CASE("q_pochhammer_inf") {
  TruncationPolicy tight{1e-14, 100000, true};
  CHECK(q_pochhammer_inf(0.0, 0.5, tight) == 1.0);
  CHECK(q_pochhammer_inf(0.25, 0.0, tight) == doctest::Approx(0.75).epsilon(1e-14));

  // brute-force 200-term product oracle
  double brute = 1.0;
  double aq = 0.5;
  for (int j = 0; j < 200; ++j) {
    brute *= 1.0 - aq;
    aq *= 0.5;
  }
  CHECK(std::fabs(q_pochhammer_inf(0.5, 0.5, tight) - brute) < 1e-12);

  auto full = q_pochhammer_inf_full(0.5, 0.5, tight);
  CHECK(full.tail_bound < 1e-13 * std::fabs(full.value) + 1e-13);
  CHECK(full.terms > 10);

  CHECK_THROWS_AS(q_pochhammer_inf(0.5, 1.0, tight), DomainError);
  CHECK_THROWS_AS(q_pochhammer_inf(1.0, 0.5, tight), DomainError);
  CHECK_THROWS_AS(q_pochhammer_inf(0.5, -1.2, tight), DomainError);
}

TEST_CASE("rational parsing and formatting") {
  CHECK(rational_from_string("3/4") == ExactScalar(3, 4));
  CHECK(rational_from_string("-7/2") == ExactScalar(-7, 2));
  CHECK(rational_from_string("0.25") == ExactScalar(1, 4));
  CHECK(rational_from_string("-1.5") == ExactScalar(-3, 2));
  CHECK(rational_from_string("42") == ExactScalar(42));
  CHECK(rational_to_string(ExactScalar(-3, 2)) == "-3/2");
  CHECK(rational_to_string(ExactScalar(5)) == "5");
  CHECK_THROWS_AS(rational_from_string("1/0"), DomainError);
  CHECK_THROWS_AS(rational_from_string("abc"), DomainError);
}
