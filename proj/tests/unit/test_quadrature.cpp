#include <cmath>

#include "doctest.h"
#include "smoothsc/quadrature.hpp"

using namespace smoothsc;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

double integrate(const QuadratureRule& q, int a, int b, int c) {
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i)
    s += q.weights[i] * std::pow(q.points[i][0], a) * std::pow(q.points[i][1], b) * std::pow(q.points[i][2], c);
  return s;
}

}  // namespace

TEST_CASE("centroid rule") {
  const QuadratureRule q = make_quadrature(2, 1);
  REQUIRE(q.size() == 1);
  CHECK(q.weights[0] == doctest::Approx(0.5));
  CHECK(q.points[0][0] == doctest::Approx(1.0 / 3));
  CHECK(q.points[0][1] == doctest::Approx(1.0 / 3));
}

TEST_CASE("weights sum to the reference measure and are positive") {
  for (int d = 0; d <= 10; ++d) {
    const QuadratureRule t = make_quadrature(3, d);
    double s = 0.0;
    for (double w : t.weights) {
      CHECK(w > 0.0);
      s += w;
    }
    CHECK(s == doctest::Approx(1.0 / 6).epsilon(1e-14));
  }
  const QuadratureRule q = make_quadrature(3, 2);
  double s = 0.0;
  for (double w : q.weights) s += w;
  CHECK(s == doctest::Approx(1.0 / 6));
}

TEST_CASE("monomial exactness on the reference triangle up to degree 14") {
  for (int d = 0; d <= 14; ++d) {
    const QuadratureRule q = make_quadrature(2, d);
    CHECK(q.degree >= d);
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b) {
        const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        CHECK(integrate(q, a, b, 0) == doctest::Approx(exact).epsilon(1e-13));
      }
  }
}

TEST_CASE("monomial exactness on the reference tetrahedron up to degree 10") {
  for (int d = 0; d <= 10; ++d) {
    const QuadratureRule q = make_quadrature(3, d);
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b)
        for (int c = 0; a + b + c <= d; ++c) {
          const double exact = factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3);
          CHECK(integrate(q, a, b, c) == doctest::Approx(exact).epsilon(1e-13));
        }
  }
}

TEST_CASE("interval rules") {
  for (int d = 0; d <= 20; ++d) {
    const QuadratureRule q = make_quadrature(1, d);
    for (int a = 0; a <= d; ++a) CHECK(integrate(q, a, 0, 0) == doctest::Approx(1.0 / (a + 1)).epsilon(1e-13));
  }
}

TEST_CASE("a rule is not exact one degree beyond what it needs to be") {
  // The 1-point rule integrates x^2 wrongly: a sanity check on the oracle.
  const QuadratureRule q = make_quadrature(2, 1);
  CHECK(std::abs(integrate(q, 2, 0, 0) - 1.0 / 12) > 1e-3);
}

TEST_CASE("unsupported degrees throw") {
  CHECK_THROWS(make_quadrature(2, 15));
  CHECK_THROWS(make_quadrature(3, 11));
  CHECK_THROWS(make_quadrature(4, 1));
}

TEST_CASE("barycentric coordinates sum to one") {
  const QuadratureRule q = make_quadrature(3, 5);
  for (std::size_t i = 0; i < q.size(); ++i) CHECK(q.barycentric(i).sum() == doctest::Approx(1.0));
}
