#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "qmehler/polyalg.hpp"

using namespace qmehler;

namespace {

// deterministic small random polynomials over the rationals
struct PolyGen {
  std::mt19937 rng{20240817};
  std::uniform_int_distribution<int> numer{-6, 6};
  std::uniform_int_distribution<int> denom{1, 5};
  std::uniform_int_distribution<int> deg{0, 4};

  ExactScalar scalar() { return ExactScalar(numer(rng), denom(rng)); }
  Poly2 poly() {
    Poly2 p;
    int dx = deg(rng), dy = deg(rng);
    for (int i = 0; i <= dx; ++i)
      for (int j = 0; j <= dy; ++j) {
        ExactScalar c = scalar();
        if (!(c == ExactScalar(0))) p = p + Poly2::monomial(i, j, c);
      }
    return p;
  }
};

}  // namespace

TEST_CASE("additive identity and inverse") {
  PolyGen gen;
  for (int t = 0; t < 20; ++t) {
    Poly2 p = gen.poly();
    CHECK(p + Poly2() == p);
    CHECK((p - p).is_zero());
    CHECK((p + p * ExactScalar(-1)).is_zero());
  }
}

TEST_CASE("disjoint supports add cleanly") {
  Poly2 sum = Poly2::x() + Poly2::y();
  CHECK(sum.total_degree() == 1);
  CHECK(sum.coeff(1, 0) == 1);
  CHECK(sum.coeff(0, 1) == 1);
  CHECK(sum.coeff(0, 0) == 0);
}

TEST_CASE("difference of squares") {
  Poly2 x = Poly2::x(), y = Poly2::y();
  Poly2 prod = (x - y) * (x + y);
  Poly2 expected = Poly2::monomial(2, 0) - Poly2::monomial(0, 2);
  CHECK(prod == expected);
  CHECK(prod * Poly2(ExactScalar(1)) == prod);
}

TEST_CASE("omega at rho = 0 is the constant 1") {
  // (1-r^2)^2 - 4r(1+r^2)xy + 4r^2(x^2+y^2) with r = 0
  ExactScalar r(0);
  Poly2 omega = Poly2((ExactScalar(1) - r * r) * (ExactScalar(1) - r * r)) +
                Poly2::monomial(1, 1, -ExactScalar(4) * r * (ExactScalar(1) + r * r)) +
                Poly2::monomial(2, 0, ExactScalar(4) * r * r) +
                Poly2::monomial(0, 2, ExactScalar(4) * r * r);
  CHECK(omega == Poly2(ExactScalar(1)));
  CHECK(omega.total_degree() == 0);
}

TEST_CASE("ring axioms on randomized polynomials") {
  PolyGen gen;
  for (int t = 0; t < 12; ++t) {
    Poly2 a = gen.poly(), b = gen.poly(), c = gen.poly();
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
  }
}

TEST_CASE("degree is additive under multiplication") {
  PolyGen gen;
  for (int t = 0; t < 12; ++t) {
    Poly2 a = gen.poly(), b = gen.poly();
    if (a.is_zero() || b.is_zero()) continue;
    CHECK((a * b).total_degree() == a.total_degree() + b.total_degree());
  }
}

TEST_CASE("evaluation commutes with ring operations at rational points") {
  PolyGen gen;
  for (int t = 0; t < 12; ++t) {
    Poly2 a = gen.poly(), b = gen.poly();
    ExactScalar x = gen.scalar(), y = gen.scalar();
    CHECK((a + b).eval(x, y) == a.eval(x, y) + b.eval(x, y));
    CHECK((a * b).eval(x, y) == a.eval(x, y) * b.eval(x, y));
  }
}

TEST_CASE("evaluation basics") {
  CHECK(Poly2(ExactScalar(1)).eval(ExactScalar(17, 3), ExactScalar(-4)) == 1);
  Poly2 p = Poly2::monomial(2, 0) - Poly2::monomial(0, 2);  // x^2 - y^2
  CHECK(p.eval(ExactScalar(3), ExactScalar(2)) == 5);
}

TEST_CASE("swapped variables") {
  PolyGen gen;
  for (int t = 0; t < 8; ++t) {
    Poly2 a = gen.poly();
    ExactScalar x = gen.scalar(), y = gen.scalar();
    CHECK(a.swapped_variables().eval(y, x) == a.eval(x, y));
    CHECK(a.swapped_variables().swapped_variables() == a);
  }
}

TEST_CASE("univariate polynomials: arithmetic and evaluation") {
  Poly1 x = Poly1::x();
  Poly1 p = x * x - Poly1(ExactScalar(1));  // x^2 - 1
  CHECK(p.degree() == 2);
  CHECK(p.eval(ExactScalar(3)) == 8);
  CHECK((p - p).is_zero());
  CHECK((p * p).degree() == 4);
  Poly1d pd = to_double_poly(p);
  CHECK(pd.eval(1.0) == 0.0);
}

TEST_CASE("JSON round trip preserves exact coefficients") {
  PolyGen gen;
  for (int t = 0; t < 8; ++t) {
    Poly2 a = gen.poly();
    CHECK(poly2_from_json(poly2_to_json(a)) == a);
  }
  Poly1 p(std::vector<ExactScalar>{ExactScalar(1, 3), ExactScalar(0), ExactScalar(-7, 5)});
  CHECK(poly1_from_json(poly1_to_json(p)) == p);
  // zero polynomial round-trips too
  CHECK(poly2_from_json(poly2_to_json(Poly2())).is_zero());
}
