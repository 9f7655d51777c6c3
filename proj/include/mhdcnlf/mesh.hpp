#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace mhd {

struct Rect {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
};

inline Rect unit_square() { return Rect{0.0, 1.0, 0.0, 1.0}; }

enum class BoundaryTag : int { Left = 0, Right = 1, Bottom = 2, Top = 3 };

struct BoundaryEdge {
  int v0, v1;
  BoundaryTag tag;
};

/// Conforming triangulation of an axis-aligned rectangle. Immutable after
/// construction; structured provenance (nx, ny, domain) is kept so that
/// point location stays O(1).
struct Mesh {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> triangles;  // CCW vertex indices
  std::vector<BoundaryEdge> boundary_edges;
  double h_max = 0.0;
  Rect domain;
  int nx = 0, ny = 0;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }

  double signed_area(int t) const {
    const auto& tri = triangles[t];
    const Eigen::Vector2d a = vertices[tri[0]];
    const Eigen::Vector2d b = vertices[tri[1]];
    const Eigen::Vector2d c = vertices[tri[2]];
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
  }
};

/// Splits each grid cell along the lower-left to upper-right diagonal. The
/// split direction is fixed so that repeated runs produce identical meshes.
inline Mesh build_rect_mesh(int nx, int ny, const Rect& rect = unit_square()) {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("build_rect_mesh: subdivision counts must be positive");
  if (!(rect.x0 < rect.x1) || !(rect.y0 < rect.y1))
    throw std::invalid_argument("build_rect_mesh: degenerate rectangle");

  Mesh mesh;
  mesh.domain = rect;
  mesh.nx = nx;
  mesh.ny = ny;

  const double dx = rect.width() / nx;
  const double dy = rect.height() / ny;

  mesh.vertices.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.vertices.emplace_back(rect.x0 + i * dx, rect.y0 + j * dy);

  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };

  mesh.triangles.reserve(static_cast<size_t>(2) * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  }

  for (int i = 0; i < nx; ++i) {
    mesh.boundary_edges.push_back({vid(i, 0), vid(i + 1, 0), BoundaryTag::Bottom});
    mesh.boundary_edges.push_back({vid(i, ny), vid(i + 1, ny), BoundaryTag::Top});
  }
  for (int j = 0; j < ny; ++j) {
    mesh.boundary_edges.push_back({vid(0, j), vid(0, j + 1), BoundaryTag::Left});
    mesh.boundary_edges.push_back({vid(nx, j), vid(nx, j + 1), BoundaryTag::Right});
  }

  mesh.h_max = std::hypot(dx, dy);
  return mesh;
}

struct MeshStats {
  int num_vertices = 0;
  int num_triangles = 0;
  int num_boundary_edges = 0;
  double h_max = 0.0;
  double min_angle_deg = 0.0;
};

inline MeshStats mesh_statistics(const Mesh& mesh) {
  MeshStats s;
  s.num_vertices = mesh.num_vertices();
  s.num_triangles = mesh.num_triangles();
  s.num_boundary_edges = static_cast<int>(mesh.boundary_edges.size());

  double hmax = 0.0;
  double min_angle = 3.15;
  for (const auto& tri : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const Eigen::Vector2d p = mesh.vertices[tri[e]];
      const Eigen::Vector2d q = mesh.vertices[tri[(e + 1) % 3]];
      const Eigen::Vector2d r = mesh.vertices[tri[(e + 2) % 3]];
      hmax = std::max(hmax, (q - p).norm());
      const Eigen::Vector2d u = q - p, v = r - p;
      const double ang = std::acos(u.dot(v) / (u.norm() * v.norm()));
      min_angle = std::min(min_angle, ang);
    }
  }
  s.h_max = hmax;
  s.min_angle_deg = min_angle * 180.0 / M_PI;
  return s;
}

/// Locates the triangle containing a point of the structured mesh and
/// returns its barycentric coordinates there. Points outside the domain are
/// clamped to the nearest cell.
inline int locate_point(const Mesh& mesh, const Eigen::Vector2d& p, std::array<double, 3>& bary) {
  const double dx = mesh.domain.width() / mesh.nx;
  const double dy = mesh.domain.height() / mesh.ny;
  int i = static_cast<int>(std::floor((p.x() - mesh.domain.x0) / dx));
  int j = static_cast<int>(std::floor((p.y() - mesh.domain.y0) / dy));
  i = std::clamp(i, 0, mesh.nx - 1);
  j = std::clamp(j, 0, mesh.ny - 1);
  const double xi = (p.x() - (mesh.domain.x0 + i * dx)) / dx;
  const double eta = (p.y() - (mesh.domain.y0 + j * dy)) / dy;
  // lower triangle (a,b,c) covers xi >= eta, upper (a,c,d) the rest
  const int cell = 2 * (j * mesh.nx + i);
  const int t = (xi >= eta) ? cell : cell + 1;
  const auto& tri = mesh.triangles[t];
  const Eigen::Vector2d a = mesh.vertices[tri[0]];
  const Eigen::Vector2d b = mesh.vertices[tri[1]];
  const Eigen::Vector2d c = mesh.vertices[tri[2]];
  const Eigen::Matrix2d J = (Eigen::Matrix2d() << b - a, c - a).finished();
  const Eigen::Vector2d lam = J.inverse() * (p - a);
  bary = {1.0 - lam[0] - lam[1], lam[0], lam[1]};
  return t;
}

inline Eigen::Vector2d outward_normal(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Left: return {-1.0, 0.0};
    case BoundaryTag::Right: return {1.0, 0.0};
    case BoundaryTag::Bottom: return {0.0, -1.0};
    case BoundaryTag::Top: return {0.0, 1.0};
  }
  return {0.0, 0.0};
}

}  // namespace mhd
