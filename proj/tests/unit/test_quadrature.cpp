#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "mhdcnlf/quadrature.hpp"

using namespace mhd;

namespace {

// exact integral of x^a y^b over the reference triangle: a! b! / (a+b+2)!
double exact_monomial(int a, int b) {
  double num = 1.0;
  for (int k = 2; k <= a; ++k) num *= k;
  for (int k = 2; k <= b; ++k) num *= k;
  double den = 1.0;
  for (int k = 2; k <= a + b + 2; ++k) den *= k;
  return num / den;
}

double integrate_monomial(const QuadratureRule& r, int a, int b) {
  double s = 0.0;
  for (int q = 0; q < r.size(); ++q)
    s += r.weights[q] * std::pow(r.points[q][1], a) * std::pow(r.points[q][2], b);
  return s;
}

}  // namespace

TEST_CASE("rules are exact to their stated degree", "[quadrature]") {
  for (int d = 1; d <= 10; ++d) {
    const QuadratureRule r = make_quadrature(d);
    REQUIRE(r.degree >= d);
    for (int a = 0; a <= r.degree; ++a)
      for (int b = 0; a + b <= r.degree; ++b) {
        const double got = integrate_monomial(r, a, b);
        const double want = exact_monomial(a, b);
        INFO("degree " << d << " monomial x^" << a << " y^" << b);
        CHECK(got == Catch::Approx(want).epsilon(1e-13).margin(1e-16));
      }
  }
}

TEST_CASE("weights are positive and sum to the reference area", "[quadrature]") {
  for (int d = 1; d <= 10; ++d) {
    const QuadratureRule r = make_quadrature(d);
    double s = 0.0;
    for (double w : r.weights) {
      CHECK(w > 0.0);
      s += w;
    }
    CHECK(s == Catch::Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("degree 1 is the single barycenter point", "[quadrature]") {
  const QuadratureRule r = make_quadrature(1);
  REQUIRE(r.size() == 1);
  CHECK(r.weights[0] == Catch::Approx(0.5));
  for (double l : r.points[0]) CHECK(l == Catch::Approx(1.0 / 3.0));
}

TEST_CASE("rules are symmetric under vertex permutations", "[quadrature]") {
  for (int d : {2, 4, 5, 6, 8, 10}) {
    const QuadratureRule r = make_quadrature(d);
    // the (weight, sorted barycentric multiset) fingerprint must be invariant
    // under swapping two coordinates
    auto fingerprint = [](const QuadratureRule& rule, bool swapped) {
      std::multiset<std::array<long long, 4>> fp;
      for (int q = 0; q < rule.size(); ++q) {
        auto p = rule.points[q];
        if (swapped) std::swap(p[0], p[1]);
        fp.insert({static_cast<long long>(std::llround(p[0] * 1e12)),
                   static_cast<long long>(std::llround(p[1] * 1e12)),
                   static_cast<long long>(std::llround(p[2] * 1e12)),
                   static_cast<long long>(std::llround(rule.weights[q] * 1e12))});
      }
      return fp;
    };
    CHECK(fingerprint(r, false) == fingerprint(r, true));
  }
}

TEST_CASE("barycentric monomial l1*l2*l3 integrates to 1/120", "[quadrature]") {
  const QuadratureRule r = make_quadrature(3);
  double s = 0.0;
  for (int q = 0; q < r.size(); ++q)
    s += r.weights[q] * r.points[q][0] * r.points[q][1] * r.points[q][2];
  CHECK(s == Catch::Approx(1.0 / 120.0).epsilon(1e-13));

  // the cubic bubble 27*l0*l1*l2 integrates to 27/120
  CHECK(27.0 * s == Catch::Approx(0.225).epsilon(1e-13));
}

TEST_CASE("unsupported degrees are rejected", "[quadrature]") {
  CHECK_THROWS_AS(make_quadrature(0), std::invalid_argument);
  CHECK_THROWS_AS(make_quadrature(11), std::invalid_argument);
  CHECK_THROWS_AS(make_quadrature(-2), std::invalid_argument);
}

TEST_CASE("symmetrized gauss rule reaches degree 12", "[quadrature]") {
  const QuadratureRule r = symmetrized_gauss_rule(12);
  for (int a = 0; a <= 12; ++a)
    for (int b = 0; a + b <= 12; ++b)
      CHECK(integrate_monomial(r, a, b) ==
            Catch::Approx(exact_monomial(a, b)).epsilon(1e-12).margin(1e-16));
}
