#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace mhd {

/// Quadrature rule on the reference triangle (0,0)-(1,0)-(0,1), stored in
/// barycentric coordinates. Weights sum to the reference area 1/2 and every
/// rule is invariant under vertex permutations.
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;  // (l0, l1, l2)
  std::vector<double> weights;
  int degree = 0;

  int size() const { return static_cast<int>(points.size()); }
};

namespace detail {

inline void push_orbit1(QuadratureRule& r, double w) {
  r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  r.weights.push_back(0.5 * w);
}

inline void push_orbit3(QuadratureRule& r, double a, double w) {
  const double c = 1.0 - 2.0 * a;
  r.points.push_back({a, a, c});
  r.points.push_back({a, c, a});
  r.points.push_back({c, a, a});
  for (int k = 0; k < 3; ++k) r.weights.push_back(0.5 * w);
}

inline void push_orbit6(QuadratureRule& r, double a, double b, double w) {
  const double c = 1.0 - a - b;
  const std::array<std::array<double, 3>, 6> perms = {{
      {a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}}};
  for (const auto& p : perms) {
    r.points.push_back(p);
    r.weights.push_back(0.5 * w);
  }
}

/// Gauss-Legendre nodes/weights on [0,1] by Newton iteration on P_n.
inline void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));  // Chebyshev initial guess
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = 0.5 * (1.0 + t);
    w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
}

}  // namespace detail

/// Product Gauss rule collapsed onto the triangle and averaged over all six
/// vertex permutations. Exact to any requested degree; used for the high
/// degrees where no compact symmetric table is carried.
inline QuadratureRule symmetrized_gauss_rule(int degree) {
  const int m = (degree + 3) / 2;  // 2m-1 >= degree+1 covers the Duffy Jacobian
  std::vector<double> gx, gw;
  detail::gauss_legendre_01(m, gx, gw);
  QuadratureRule r;
  r.degree = degree;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      // map (s,t) in [0,1]^2 to x = s, y = t(1-s); jacobian (1-s)
      const double x = gx[i];
      const double y = gx[j] * (1.0 - gx[i]);
      const double w = gw[i] * gw[j] * (1.0 - gx[i]);
      const double l1 = x, l2 = y, l0 = 1.0 - x - y;
      const std::array<std::array<double, 3>, 6> perms = {{
          {l0, l1, l2}, {l0, l2, l1}, {l1, l0, l2}, {l1, l2, l0}, {l2, l0, l1}, {l2, l1, l0}}};
      for (const auto& p : perms) {
        r.points.push_back(p);
        r.weights.push_back(w / 6.0);
      }
    }
  }
  return r;
}

/// Symmetric positive-weight rule exact to at least min_degree (1..10).
inline QuadratureRule make_quadrature(int min_degree) {
  if (min_degree < 1 || min_degree > 10)
    throw std::invalid_argument("make_quadrature: supported degrees are 1..10");

  QuadratureRule r;
  using namespace detail;
  if (min_degree == 1) {
    r.degree = 1;
    push_orbit1(r, 1.0);
  } else if (min_degree == 2) {
    r.degree = 2;
    push_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
  } else if (min_degree <= 4) {
    r.degree = 4;
    push_orbit3(r, 0.445948490915964886318, 0.223381589678011465695);
    push_orbit3(r, 0.0915762135097707434596, 0.109951743655321867638);
  } else if (min_degree == 5) {
    r.degree = 5;
    const double s15 = std::sqrt(15.0);
    push_orbit1(r, 9.0 / 40.0);
    push_orbit3(r, (6.0 + s15) / 21.0, (155.0 + s15) / 1200.0);
    push_orbit3(r, (6.0 - s15) / 21.0, (155.0 - s15) / 1200.0);
  } else if (min_degree == 6) {
    r.degree = 6;
    push_orbit3(r, 0.249286745170910421292, 0.116786275726379366025);
    push_orbit3(r, 0.0630890144915022283403, 0.0508449063702068169209);
    push_orbit6(r, 0.310352451033784405417, 0.0531450498448169473532, 0.0828510756183735751936);
  } else if (min_degree <= 8) {
    r.degree = 8;
    push_orbit1(r, 0.144315607677787168251);
    push_orbit3(r, 0.459292588292723156029, 0.0950916342672846247939);
    push_orbit3(r, 0.170569307751760206622, 0.103217370534718250282);
    push_orbit3(r, 0.0505472283170309754584, 0.0324584976231980803109);
    push_orbit6(r, 0.263112829634638113422, 0.728492392955404281241, 0.0272303141744349942648);
  } else {
    r = symmetrized_gauss_rule(10);
  }
  return r;
}

}  // namespace mhd
