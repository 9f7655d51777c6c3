#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "mhdcnlf/basis.hpp"
#include "mhdcnlf/mesh.hpp"

namespace mhd {

enum class FieldRole { Velocity, Pressure, Magnetic };

/// Which (boundary tag, component) pairs carry an essential condition.
struct DirichletPolicy {
  std::array<std::array<bool, 2>, 4> mask{};  // [tag][component]

  static DirichletPolicy none() { return {}; }

  static DirichletPolicy all(int components) {
    DirichletPolicy p;
    for (auto& t : p.mask)
      for (int c = 0; c < components; ++c) t[c] = true;
    return p;
  }

  DirichletPolicy& set(BoundaryTag tag, int component, bool on = true) {
    mask[static_cast<int>(tag)][component] = on;
    return *this;
  }

  bool is_set(BoundaryTag tag, int component) const {
    return mask[static_cast<int>(tag)][component];
  }
};

/// Global numbering for one field. Per component the vertex dofs come first
/// (shared between triangles), then one bubble dof per triangle when the
/// basis carries the enrichment. Bubble dofs are never shared and never
/// constrained: the bubble trace vanishes on every edge.
struct DofMap {
  FieldRole role = FieldRole::Pressure;
  BasisKind basis = BasisKind::P1;
  int components = 1;
  int num_vertices = 0;
  int num_triangles = 0;
  int per_component = 0;
  int num_global = 0;
  std::vector<char> dirichlet;  // 1 for constrained dofs

  bool has_bubble() const { return basis == BasisKind::P1Bubble; }
  int locals_per_component() const { return num_local_functions(basis); }
  int num_local() const { return components * locals_per_component(); }

  int vertex_dof(int comp, int v) const { return comp * per_component + v; }
  int bubble_dof(int comp, int t) const { return comp * per_component + num_vertices + t; }

  /// Global index of local function k (within component comp) on triangle t.
  int global_index(const Mesh& mesh, int t, int comp, int k) const {
    return k < 3 ? vertex_dof(comp, mesh.triangles[t][k]) : bubble_dof(comp, t);
  }

  int num_constrained() const {
    int n = 0;
    for (char c : dirichlet) n += c;
    return n;
  }
};

inline DofMap build_dofmap(const Mesh& mesh, FieldRole role, BasisKind basis, int components,
                           const DirichletPolicy& policy = DirichletPolicy::none()) {
  DofMap dm;
  dm.role = role;
  dm.basis = basis;
  dm.components = components;
  dm.num_vertices = mesh.num_vertices();
  dm.num_triangles = mesh.num_triangles();
  dm.per_component = dm.num_vertices + (dm.has_bubble() ? dm.num_triangles : 0);
  dm.num_global = components * dm.per_component;
  dm.dirichlet.assign(dm.num_global, 0);

  for (const auto& e : mesh.boundary_edges) {
    for (int c = 0; c < components; ++c) {
      if (!policy.is_set(e.tag, c)) continue;
      dm.dirichlet[dm.vertex_dof(c, e.v0)] = 1;
      dm.dirichlet[dm.vertex_dof(c, e.v1)] = 1;
    }
  }
  return dm;
}

/// Fills prescribed values at constrained dofs by evaluating value(x, comp)
/// at the supporting vertex. Unconstrained entries are left untouched.
inline void fill_dirichlet_values(const Mesh& mesh, const DofMap& dm,
                                  const std::function<double(const Eigen::Vector2d&, int)>& value,
                                  Eigen::VectorXd& out) {
  for (int c = 0; c < dm.components; ++c)
    for (int v = 0; v < dm.num_vertices; ++v) {
      const int dof = dm.vertex_dof(c, v);
      if (dm.dirichlet[dof]) out[dof] = value(mesh.vertices[v], c);
    }
}

/// Vertex interpolation: bubble coefficients stay zero, so the interpolant
/// of a globally linear field is reproduced exactly.
inline Eigen::VectorXd interpolate(const Mesh& mesh, const DofMap& dm,
                                   const std::function<double(const Eigen::Vector2d&, int)>& fn) {
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(dm.num_global);
  for (int c = 0; c < dm.components; ++c)
    for (int v = 0; v < dm.num_vertices; ++v)
      coeffs[dm.vertex_dof(c, v)] = fn(mesh.vertices[v], c);
  return coeffs;
}

/// Point evaluation of a coefficient vector (all components at once).
inline Eigen::VectorXd evaluate_field(const Mesh& mesh, const DofMap& dm,
                                      const Eigen::VectorXd& coeffs, const Eigen::Vector2d& p) {
  std::array<double, 3> bary;
  const int t = locate_point(mesh, p, bary);
  const auto values = eval_basis(dm.basis, bary);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dm.components);
  for (int c = 0; c < dm.components; ++c)
    for (int k = 0; k < dm.locals_per_component(); ++k)
      out[c] += coeffs[dm.global_index(mesh, t, c, k)] * values[k];
  return out;
}

}  // namespace mhd
