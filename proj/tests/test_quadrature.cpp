#include <doctest.h>

#include <cmath>

#include "tdgl/quadrature.hpp"

using tdgl::QuadratureRule;
using tdgl::interval_rule;
using tdgl::simplex_rule;

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

double integrate_monomial(const QuadratureRule& q, int a, int b, int c) {
  double s = 0.0;
  for (int i = 0; i < q.npoints(); ++i)
    s += q.weights[i] * std::pow(q.points[i][0], a) * std::pow(q.points[i][1], b) *
         std::pow(q.points[i][2], c);
  return s;
}

}  // namespace

TEST_SUITE_BEGIN("quadrature");

TEST_CASE("interval rules integrate monomials exactly") {
  for (int deg = 0; deg <= 21; ++deg) {
    const QuadratureRule q = interval_rule(deg);
    double wsum = 0.0;
    for (int i = 0; i < q.npoints(); ++i) {
      CHECK(q.weights[i] > 0.0);
      CHECK(q.points[i][0] > 0.0);
      CHECK(q.points[i][0] < 1.0);
      wsum += q.weights[i];
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    for (int k = 0; k <= deg; ++k) {
      const double exact = 1.0 / (k + 1);
      CHECK(integrate_monomial(q, k, 0, 0) == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("triangle rules: monomial exactness and positivity") {
  // reference triangle {x,y >= 0, x+y <= 1}: int x^a y^b = a! b! / (a+b+2)!
  for (int deg = 1; deg <= 14; ++deg) {
    const QuadratureRule& q = simplex_rule(2, deg);
    double wsum = 0.0;
    for (int i = 0; i < q.npoints(); ++i) {
      CHECK(q.weights[i] > 0.0);
      const double x = q.points[i][0], y = q.points[i][1];
      CHECK(x > -1e-15);
      CHECK(y > -1e-15);
      CHECK(x + y < 1.0 + 1e-15);
      wsum += q.weights[i];
    }
    CHECK(wsum == doctest::Approx(0.5).epsilon(1e-14));
    for (int a = 0; a <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b) {
        const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        CHECK(integrate_monomial(q, a, b, 0) == doctest::Approx(exact).epsilon(1e-12));
      }
  }
}

TEST_CASE("tetrahedron rules: monomial exactness and positivity") {
  // int x^a y^b z^c over the reference tet = a! b! c! / (a+b+c+3)!
  for (int deg = 1; deg <= 10; ++deg) {
    const QuadratureRule& q = simplex_rule(3, deg);
    double wsum = 0.0;
    for (int i = 0; i < q.npoints(); ++i) {
      CHECK(q.weights[i] > 0.0);
      const double x = q.points[i][0], y = q.points[i][1], z = q.points[i][2];
      CHECK(x > -1e-15);
      CHECK(y > -1e-15);
      CHECK(z > -1e-15);
      CHECK(x + y + z < 1.0 + 1e-15);
      wsum += q.weights[i];
    }
    CHECK(wsum == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    for (int a = 0; a <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b)
        for (int c = 0; a + b + c <= deg; ++c) {
          const double exact =
              factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3);
          CHECK(integrate_monomial(q, a, b, c) == doctest::Approx(exact).epsilon(1e-12));
        }
  }
}

TEST_CASE("rule cache returns the same object") {
  const QuadratureRule& a = simplex_rule(2, 5);
  const QuadratureRule& b = simplex_rule(2, 5);
  CHECK(&a == &b);
  CHECK(a.degree >= 5);
}

TEST_CASE("requested degree is honored, not rounded down") {
  for (int deg : {2, 5, 9}) {
    CHECK(simplex_rule(2, deg).degree >= deg);
    CHECK(simplex_rule(3, deg).degree >= deg);
  }
}

TEST_SUITE_END();
