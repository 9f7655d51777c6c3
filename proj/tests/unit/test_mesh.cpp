#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "mhdcnlf/mesh.hpp"

using namespace mhd;

TEST_CASE("structured mesh counts", "[mesh]") {
  const Mesh m = build_rect_mesh(2, 2, unit_square());
  CHECK(m.num_vertices() == 9);
  CHECK(m.num_triangles() == 8);
  CHECK(m.boundary_edges.size() == 8);
}

TEST_CASE("single cell mesh", "[mesh]") {
  const Mesh m = build_rect_mesh(1, 1, unit_square());
  CHECK(m.num_vertices() == 4);
  CHECK(m.num_triangles() == 2);
  CHECK(m.h_max == Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("invalid subdivisions rejected", "[mesh]") {
  CHECK_THROWS_AS(build_rect_mesh(0, 1, unit_square()), std::invalid_argument);
  CHECK_THROWS_AS(build_rect_mesh(3, -1, unit_square()), std::invalid_argument);
  CHECK_THROWS_AS(build_rect_mesh(2, 2, Rect{1.0, 1.0, 0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("triangle areas are positive and sum to the domain area", "[mesh]") {
  const Rect r{-1.0, 3.0, 0.5, 2.5};
  const Mesh m = build_rect_mesh(8, 8, r);
  double total = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const double a = m.signed_area(t);
    REQUIRE(a > 0.0);
    total += a;
  }
  CHECK(total == Catch::Approx(r.area()).epsilon(1e-13));

  const Mesh u = build_rect_mesh(8, 8, unit_square());
  double s = 0.0;
  for (int t = 0; t < u.num_triangles(); ++t) s += u.signed_area(t);
  CHECK(std::abs(s - 1.0) < 1e-14);
}

TEST_CASE("mesh is conforming and satisfies the Euler relation", "[mesh]") {
  const Mesh m = build_rect_mesh(5, 3, unit_square());

  std::map<std::pair<int, int>, int> edge_count;
  auto key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
  for (const auto& tri : m.triangles)
    for (int e = 0; e < 3; ++e) edge_count[key(tri[e], tri[(e + 1) % 3])]++;

  std::set<std::pair<int, int>> boundary;
  for (const auto& be : m.boundary_edges) boundary.insert(key(be.v0, be.v1));

  for (const auto& [edge, count] : edge_count) {
    if (count == 1) {
      CHECK(boundary.count(edge) == 1);
    } else {
      CHECK(count == 2);
      CHECK(boundary.count(edge) == 0);
    }
  }

  const int V = m.num_vertices();
  const int E = static_cast<int>(edge_count.size());
  const int T = m.num_triangles();
  CHECK(V - E + T == 1);
}

TEST_CASE("interior edges appear with opposite orientation", "[mesh]") {
  const Mesh m = build_rect_mesh(4, 4, unit_square());
  std::map<std::pair<int, int>, int> directed;
  for (const auto& tri : m.triangles)
    for (int e = 0; e < 3; ++e) directed[{tri[e], tri[(e + 1) % 3]}]++;
  // CCW orientation: a directed edge never repeats, and interior edges show
  // up once per direction
  for (const auto& [edge, count] : directed) {
    CHECK(count == 1);
  }
}

TEST_CASE("boundary tags sit on the right sides", "[mesh]") {
  const Rect r{0.0, 2.0, -1.0, 1.0};
  const Mesh m = build_rect_mesh(4, 6, r);
  for (const auto& e : m.boundary_edges) {
    const auto& a = m.vertices[e.v0];
    const auto& b = m.vertices[e.v1];
    switch (e.tag) {
      case BoundaryTag::Left:
        CHECK(a.x() == r.x0);
        CHECK(b.x() == r.x0);
        break;
      case BoundaryTag::Right:
        CHECK(a.x() == r.x1);
        CHECK(b.x() == r.x1);
        break;
      case BoundaryTag::Bottom:
        CHECK(a.y() == r.y0);
        CHECK(b.y() == r.y0);
        break;
      case BoundaryTag::Top:
        CHECK(a.y() == r.y1);
        CHECK(b.y() == r.y1);
        break;
    }
  }
}

TEST_CASE("mesh statistics", "[mesh]") {
  const Mesh m2 = build_rect_mesh(2, 2, unit_square());
  const MeshStats s2 = mesh_statistics(m2);
  CHECK(s2.num_triangles == 8);

  for (int n : {3, 8, 16}) {
    const Mesh m = build_rect_mesh(n, n, unit_square());
    const MeshStats s = mesh_statistics(m);
    CHECK(s.h_max == Catch::Approx(std::sqrt(2.0) / n).epsilon(1e-13));
    CHECK(s.min_angle_deg == Catch::Approx(45.0).epsilon(1e-10));
    CHECK(s.h_max == m.h_max);
  }
}

TEST_CASE("point location finds the containing triangle", "[mesh]") {
  const Mesh m = build_rect_mesh(7, 5, Rect{0.0, 10.0, -1.0, 1.0});
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> ux(0.0, 10.0), uy(-1.0, 1.0);
  for (int it = 0; it < 200; ++it) {
    const Eigen::Vector2d p(ux(rng), uy(rng));
    std::array<double, 3> bary;
    const int t = locate_point(m, p, bary);
    REQUIRE(t >= 0);
    REQUIRE(t < m.num_triangles());
    for (double l : bary) CHECK(l >= -1e-12);
    const auto& tri = m.triangles[t];
    const Eigen::Vector2d back = bary[0] * m.vertices[tri[0]] + bary[1] * m.vertices[tri[1]] +
                                 bary[2] * m.vertices[tri[2]];
    CHECK((back - p).norm() < 1e-12);
  }
}
