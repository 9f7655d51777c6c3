#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include <Eigen/Core>

#include "mhdcnlf/mesh.hpp"

namespace mhd {

enum class BasisKind { P1, P1Bubble };

inline int num_local_functions(BasisKind kind) {
  return kind == BasisKind::P1 ? 3 : 4;
}

using BaryPoint = std::array<double, 3>;

namespace detail {
inline void check_simplex_coords(const BaryPoint& l) {
  constexpr double tol = 1e-12;
  if (l[0] < -tol || l[1] < -tol || l[2] < -tol ||
      std::abs(l[0] + l[1] + l[2] - 1.0) > tol)
    throw std::invalid_argument("eval_basis: barycentric coordinates outside the simplex");
}
}  // namespace detail

/// Shape function values at a barycentric point. The P1Bubble basis is
/// hierarchical: the three vertex hats followed by the cubic bubble
/// 27*l0*l1*l2, which is 1 at the barycenter and 0 on all edges.
inline std::array<double, 4> eval_basis(BasisKind kind, const BaryPoint& l) {
  detail::check_simplex_coords(l);
  std::array<double, 4> v = {l[0], l[1], l[2], 0.0};
  if (kind == BasisKind::P1Bubble) v[3] = 27.0 * l[0] * l[1] * l[2];
  return v;
}

/// Gradients with respect to the reference coordinates (xi, eta), where
/// l0 = 1-xi-eta, l1 = xi, l2 = eta.
inline std::array<Eigen::Vector2d, 4> eval_reference_gradients(BasisKind kind, const BaryPoint& l) {
  std::array<Eigen::Vector2d, 4> g = {
      Eigen::Vector2d(-1.0, -1.0), Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.0, 1.0),
      Eigen::Vector2d(0.0, 0.0)};
  if (kind == BasisKind::P1Bubble) {
    // d(l0*l1*l2) through the chain rule in (xi, eta)
    g[3] = 27.0 * (l[1] * l[2] * g[0] + l[0] * l[2] * g[1] + l[0] * l[1] * g[2]);
  }
  return g;
}

/// Affine geometry of one triangle: x = v0 + J * (xi, eta).
struct ElementGeometry {
  Eigen::Vector2d v0;
  Eigen::Matrix2d J;
  Eigen::Matrix2d Jinv_t;
  double det = 0.0;

  ElementGeometry(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
    v0 = a;
    J.col(0) = b - a;
    J.col(1) = c - a;
    det = J(0, 0) * J(1, 1) - J(0, 1) * J(1, 0);
    const double scale = std::max({J.col(0).norm(), J.col(1).norm(), 1e-300});
    if (std::abs(det) < 1e-14 * scale * scale)
      throw std::invalid_argument("ElementGeometry: degenerate triangle");
    Jinv_t = J.inverse().transpose();
  }

  ElementGeometry(const Mesh& mesh, int t)
      : ElementGeometry(mesh.vertices[mesh.triangles[t][0]],
                        mesh.vertices[mesh.triangles[t][1]],
                        mesh.vertices[mesh.triangles[t][2]]) {}

  Eigen::Vector2d map(const BaryPoint& l) const {
    return v0 + J * Eigen::Vector2d(l[1], l[2]);
  }
};

/// Physical gradients of the shape functions on a given triangle.
inline std::array<Eigen::Vector2d, 4> eval_basis_gradients(BasisKind kind, const BaryPoint& l,
                                                           const ElementGeometry& geom) {
  auto g = eval_reference_gradients(kind, l);
  for (int k = 0; k < num_local_functions(kind); ++k) g[k] = geom.Jinv_t * g[k];
  return g;
}

}  // namespace mhd
