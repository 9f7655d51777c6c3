#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "mhdcnlf/basis.hpp"
#include "mhdcnlf/dofmap.hpp"
#include "mhdcnlf/mesh.hpp"
#include "mhdcnlf/quadrature.hpp"
#include "mhdcnlf/sparse.hpp"

namespace mhd {

struct PhysicalParams {
  double nu = 1.0;     // viscosity
  double mu = 1.0;     // magnetic permeability
  double sigma = 1.0;  // electric conductivity
};

enum class SpaceId { Velocity, Pressure, Magnetic };

namespace detail {

/// Reference-element shape values and gradients tabulated at the quadrature
/// points, shared by every assembly loop on the mesh.
struct BasisTable {
  BasisKind kind = BasisKind::P1;
  int n_local = 0;
  // [q][k]
  std::vector<std::array<double, 4>> values;
  std::vector<std::array<Eigen::Vector2d, 4>> ref_grads;

  BasisTable() = default;
  BasisTable(BasisKind k, const QuadratureRule& quad) : kind(k), n_local(num_local_functions(k)) {
    values.reserve(quad.size());
    ref_grads.reserve(quad.size());
    for (const auto& p : quad.points) {
      values.push_back(eval_basis(k, p));
      ref_grads.push_back(eval_reference_gradients(k, p));
    }
  }
};

}  // namespace detail

/// Everything the assembly routines need: mesh, a shared quadrature rule
/// (skew-symmetry of the convection form relies on one rule serving both
/// orderings), dof maps and physical parameters.
struct FormContext {
  const Mesh* mesh = nullptr;
  QuadratureRule quad;
  const DofMap* velocity = nullptr;
  const DofMap* pressure = nullptr;
  const DofMap* magnetic = nullptr;
  PhysicalParams params;

  detail::BasisTable vel_table, pres_table, mag_table;

  const DofMap& space(SpaceId id) const {
    switch (id) {
      case SpaceId::Velocity: return *velocity;
      case SpaceId::Pressure: return *pressure;
      case SpaceId::Magnetic: return *magnetic;
    }
    throw std::logic_error("unknown space");
  }

  const detail::BasisTable& table(SpaceId id) const {
    switch (id) {
      case SpaceId::Velocity: return vel_table;
      case SpaceId::Pressure: return pres_table;
      case SpaceId::Magnetic: return mag_table;
    }
    throw std::logic_error("unknown space");
  }
};

inline FormContext make_form_context(const Mesh& mesh, const QuadratureRule& quad,
                                     const DofMap& velocity, const DofMap& pressure,
                                     const DofMap& magnetic, const PhysicalParams& params) {
  if (!(params.nu > 0.0) || !(params.mu > 0.0) || !(params.sigma > 0.0))
    throw std::invalid_argument("FormContext: physical parameters must be positive");
  FormContext ctx;
  ctx.mesh = &mesh;
  ctx.quad = quad;
  ctx.velocity = &velocity;
  ctx.pressure = &pressure;
  ctx.magnetic = &magnetic;
  ctx.params = params;
  ctx.vel_table = detail::BasisTable(velocity.basis, quad);
  ctx.pres_table = detail::BasisTable(pressure.basis, quad);
  ctx.mag_table = detail::BasisTable(magnetic.basis, quad);
  return ctx;
}

namespace detail {

/// Physical gradients of one basis table on one triangle, laid out [q][k].
inline void physical_gradients(const BasisTable& table, const ElementGeometry& geom,
                               std::vector<std::array<Eigen::Vector2d, 4>>& out) {
  out.resize(table.values.size());
  for (size_t q = 0; q < table.values.size(); ++q)
    for (int k = 0; k < table.n_local; ++k) out[q][k] = geom.Jinv_t * table.ref_grads[q][k];
}

/// 2D curl of the vector basis function e_c * N: scalar -d_y N for c = 0,
/// +d_x N for c = 1.
inline double curl2d(int comp, const Eigen::Vector2d& grad) {
  return comp == 0 ? -grad.y() : grad.x();
}

/// div(e_c * N) = d_c N.
inline double div2d(int comp, const Eigen::Vector2d& grad) { return grad[comp]; }

}  // namespace detail

/// (trial, test) L2 pairing on the given space; block diagonal over components.
inline CsrMatrix assemble_mass(const FormContext& ctx, SpaceId space) {
  const DofMap& dm = ctx.space(space);
  const auto& tab = ctx.table(space);
  const Mesh& mesh = *ctx.mesh;
  TripletBuffer buf(dm.num_global, dm.num_global);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geom(mesh, t);
    for (int q = 0; q < ctx.quad.size(); ++q) {
      const double w = ctx.quad.weights[q] * geom.det;
      for (int i = 0; i < tab.n_local; ++i)
        for (int j = 0; j < tab.n_local; ++j) {
          const double v = w * tab.values[q][i] * tab.values[q][j];
          for (int c = 0; c < dm.components; ++c)
            buf.add(dm.global_index(mesh, t, c, i), dm.global_index(mesh, t, c, j), v);
        }
    }
  }
  return finalize(buf);
}

/// coefficient * (grad trial, grad test), componentwise.
inline CsrMatrix assemble_stiffness(const FormContext& ctx, SpaceId space, double coefficient) {
  if (!(coefficient > 0.0))
    throw std::invalid_argument("assemble_stiffness: coefficient must be positive");
  const DofMap& dm = ctx.space(space);
  const auto& tab = ctx.table(space);
  const Mesh& mesh = *ctx.mesh;
  TripletBuffer buf(dm.num_global, dm.num_global);
  std::vector<std::array<Eigen::Vector2d, 4>> grads;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geom(mesh, t);
    detail::physical_gradients(tab, geom, grads);
    for (int q = 0; q < ctx.quad.size(); ++q) {
      const double w = coefficient * ctx.quad.weights[q] * geom.det;
      for (int i = 0; i < tab.n_local; ++i)
        for (int j = 0; j < tab.n_local; ++j) {
          const double v = w * grads[q][i].dot(grads[q][j]);
          for (int c = 0; c < dm.components; ++c)
            buf.add(dm.global_index(mesh, t, c, i), dm.global_index(mesh, t, c, j), v);
        }
    }
  }
  return finalize(buf);
}

/// d(v, q) = (div v, q): pressure-test rows, velocity-trial columns.
inline CsrMatrix assemble_div(const FormContext& ctx) {
  const DofMap& vel = *ctx.velocity;
  const DofMap& pres = *ctx.pressure;
  const Mesh& mesh = *ctx.mesh;
  TripletBuffer buf(pres.num_global, vel.num_global);
  std::vector<std::array<Eigen::Vector2d, 4>> vgrads;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geom(mesh, t);
    detail::physical_gradients(ctx.vel_table, geom, vgrads);
    for (int q = 0; q < ctx.quad.size(); ++q) {
      const double w = ctx.quad.weights[q] * geom.det;
      for (int iq = 0; iq < ctx.pres_table.n_local; ++iq) {
        const double psi = w * ctx.pres_table.values[q][iq];
        const int row = pres.global_index(mesh, t, 0, iq);
        for (int k = 0; k < ctx.vel_table.n_local; ++k)
          for (int c = 0; c < 2; ++c)
            buf.add(row, vel.global_index(mesh, t, c, k), psi * vgrads[q][k][c]);
      }
    }
  }
  return finalize(buf);
}

namespace detail {

/// Gathers the local coefficients of a 2-component field on triangle t.
template <int MaxLoc>
inline void gather_local(const Mesh& mesh, const DofMap& dm, const Eigen::VectorXd& coeffs, int t,
                         std::array<double, MaxLoc>& local) {
  const int nl = dm.locals_per_component();
  for (int c = 0; c < dm.components; ++c)
    for (int k = 0; k < nl; ++k) local[c * nl + k] = coeffs[dm.global_index(mesh, t, c, k)];
}

}  // namespace detail

/// Skew-symmetrized convection N(w): (w . grad) trial . test + 1/2 (div w)
/// trial . test, with the advecting field w frozen.
inline CsrMatrix assemble_convection(const FormContext& ctx, const Eigen::VectorXd& w_coeffs) {
  const DofMap& vel = *ctx.velocity;
  const Mesh& mesh = *ctx.mesh;
  if (w_coeffs.size() != vel.num_global)
    throw std::invalid_argument("assemble_convection: advecting field size mismatch");
  const auto& tab = ctx.vel_table;
  TripletBuffer buf(vel.num_global, vel.num_global);
  std::vector<std::array<Eigen::Vector2d, 4>> grads;
  std::array<double, 8> wloc{};
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geom(mesh, t);
    detail::physical_gradients(tab, geom, grads);
    detail::gather_local<8>(mesh, vel, w_coeffs, t, wloc);
    const int nl = tab.n_local;
    for (int q = 0; q < ctx.quad.size(); ++q) {
      const double wq = ctx.quad.weights[q] * geom.det;
      Eigen::Vector2d wval(0.0, 0.0);
      double wdiv = 0.0;
      for (int k = 0; k < nl; ++k) {
        wval.x() += wloc[k] * tab.values[q][k];
        wval.y() += wloc[nl + k] * tab.values[q][k];
        wdiv += wloc[k] * grads[q][k].x() + wloc[nl + k] * grads[q][k].y();
      }
      for (int i = 0; i < nl; ++i)
        for (int j = 0; j < nl; ++j) {
          const double v =
              wq * (wval.dot(grads[q][j]) * tab.values[q][i] +
                    0.5 * wdiv * tab.values[q][j] * tab.values[q][i]);
          for (int c = 0; c < 2; ++c)
            buf.add(vel.global_index(mesh, t, c, i), vel.global_index(mesh, t, c, j), v);
        }
    }
  }
  return finalize(buf);
}

/// Lorentz coupling L(H): mu * (H x curl B, v) with H frozen. Velocity-test
/// rows, magnetic-trial columns. In 2D, H x s = (H2 s, -H1 s) for the scalar
/// curl s.
inline CsrMatrix assemble_lorentz(const FormContext& ctx, const Eigen::VectorXd& H_coeffs) {
  const DofMap& vel = *ctx.velocity;
  const DofMap& mag = *ctx.magnetic;
  const Mesh& mesh = *ctx.mesh;
  if (H_coeffs.size() != mag.num_global)
    throw std::invalid_argument("assemble_lorentz: magnetic field size mismatch");
  TripletBuffer buf(vel.num_global, mag.num_global);
  std::vector<std::array<Eigen::Vector2d, 4>> mgrads;
  std::array<double, 8> hloc{};
  const int nlv = ctx.vel_table.n_local;
  const int nlm = ctx.mag_table.n_local;
  const double mu = ctx.params.mu;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geom(mesh, t);
    detail::physical_gradients(ctx.mag_table, geom, mgrads);
    detail::gather_local<8>(mesh, mag, H_coeffs, t, hloc);
    for (int q = 0; q < ctx.quad.size(); ++q) {
      const double wq = ctx.quad.weights[q] * geom.det;
      double h1 = 0.0, h2 = 0.0;
      for (int k = 0; k < nlm; ++k) {
        h1 += hloc[k] * ctx.mag_table.values[q][k];
        h2 += hloc[nlm + k] * ctx.mag_table.values[q][k];
      }
      for (int cj = 0; cj < 2; ++cj)
        for (int j = 0; j < nlm; ++j) {
          const double curl_j = detail::curl2d(cj, mgrads[q][j]);
          const int col = mag.global_index(mesh, t, cj, j);
          for (int i = 0; i < nlv; ++i) {
            const double ni = ctx.vel_table.values[q][i];
            buf.add(vel.global_index(mesh, t, 0, i), col, wq * mu * h2 * curl_j * ni);
            buf.add(vel.global_index(mesh, t, 1, i), col, -wq * mu * h1 * curl_j * ni);
          }
        }
    }
  }
  return finalize(buf);
}

/// coefficient * [(curl trial, curl test) + (div trial, div test)] on the
/// magnetic space.
inline CsrMatrix assemble_curlcurl_divdiv(const FormContext& ctx, double coefficient) {
  if (!(coefficient > 0.0))
    throw std::invalid_argument("assemble_curlcurl_divdiv: coefficient must be positive");
  const DofMap& mag = *ctx.magnetic;
  const Mesh& mesh = *ctx.mesh;
  const auto& tab = ctx.mag_table;
  TripletBuffer buf(mag.num_global, mag.num_global);
  std::vector<std::array<Eigen::Vector2d, 4>> grads;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geom(mesh, t);
    detail::physical_gradients(tab, geom, grads);
    for (int q = 0; q < ctx.quad.size(); ++q) {
      const double w = coefficient * ctx.quad.weights[q] * geom.det;
      for (int ci = 0; ci < 2; ++ci)
        for (int i = 0; i < tab.n_local; ++i) {
          const double curl_i = detail::curl2d(ci, grads[q][i]);
          const double div_i = detail::div2d(ci, grads[q][i]);
          const int row = mag.global_index(mesh, t, ci, i);
          for (int cj = 0; cj < 2; ++cj)
            for (int j = 0; j < tab.n_local; ++j) {
              const double curl_j = detail::curl2d(cj, grads[q][j]);
              const double div_j = detail::div2d(cj, grads[q][j]);
              buf.add(row, mag.global_index(mesh, t, cj, j), w * (curl_i * curl_j + div_i * div_j));
            }
        }
    }
  }
  return finalize(buf);
}

/// Curl-curl part alone; used by the energy monitor.
inline CsrMatrix assemble_curlcurl(const FormContext& ctx) {
  const DofMap& mag = *ctx.magnetic;
  const Mesh& mesh = *ctx.mesh;
  const auto& tab = ctx.mag_table;
  TripletBuffer buf(mag.num_global, mag.num_global);
  std::vector<std::array<Eigen::Vector2d, 4>> grads;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geom(mesh, t);
    detail::physical_gradients(tab, geom, grads);
    for (int q = 0; q < ctx.quad.size(); ++q) {
      const double w = ctx.quad.weights[q] * geom.det;
      for (int ci = 0; ci < 2; ++ci)
        for (int i = 0; i < tab.n_local; ++i) {
          const double curl_i = detail::curl2d(ci, grads[q][i]);
          const int row = mag.global_index(mesh, t, ci, i);
          for (int cj = 0; cj < 2; ++cj)
            for (int j = 0; j < tab.n_local; ++j)
              buf.add(row, mag.global_index(mesh, t, cj, j),
                      w * curl_i * detail::curl2d(cj, grads[q][j]));
        }
    }
  }
  return finalize(buf);
}

/// Induction coupling C(H): -mu * (u x H, curl B) with H frozen. Magnetic-test
/// rows, velocity-trial columns. The sign pairs with assemble_lorentz so that
/// x^T L(H) y + y^T C(H) x = 0 discretely.
inline CsrMatrix assemble_induction(const FormContext& ctx, const Eigen::VectorXd& H_coeffs) {
  const DofMap& vel = *ctx.velocity;
  const DofMap& mag = *ctx.magnetic;
  const Mesh& mesh = *ctx.mesh;
  if (H_coeffs.size() != mag.num_global)
    throw std::invalid_argument("assemble_induction: magnetic field size mismatch");
  TripletBuffer buf(mag.num_global, vel.num_global);
  std::vector<std::array<Eigen::Vector2d, 4>> mgrads;
  std::array<double, 8> hloc{};
  const int nlv = ctx.vel_table.n_local;
  const int nlm = ctx.mag_table.n_local;
  const double mu = ctx.params.mu;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geom(mesh, t);
    detail::physical_gradients(ctx.mag_table, geom, mgrads);
    detail::gather_local<8>(mesh, mag, H_coeffs, t, hloc);
    for (int q = 0; q < ctx.quad.size(); ++q) {
      const double wq = ctx.quad.weights[q] * geom.det;
      double h1 = 0.0, h2 = 0.0;
      for (int k = 0; k < nlm; ++k) {
        h1 += hloc[k] * ctx.mag_table.values[q][k];
        h2 += hloc[nlm + k] * ctx.mag_table.values[q][k];
      }
      for (int ci = 0; ci < 2; ++ci)
        for (int i = 0; i < nlm; ++i) {
          const double curl_i = detail::curl2d(ci, mgrads[q][i]);
          const int row = mag.global_index(mesh, t, ci, i);
          for (int j = 0; j < nlv; ++j) {
            const double nj = ctx.vel_table.values[q][j];
            // u x H = u1 H2 - u2 H1
            buf.add(row, vel.global_index(mesh, t, 0, j), -wq * mu * nj * h2 * curl_i);
            buf.add(row, vel.global_index(mesh, t, 1, j), wq * mu * nj * h1 * curl_i);
          }
        }
    }
  }
  return finalize(buf);
}

/// Load vector (f(. , t), test) over the given space.
inline Eigen::VectorXd assemble_load(
    const FormContext& ctx, SpaceId space,
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&, double)>& f, double time) {
  const DofMap& dm = ctx.space(space);
  const auto& tab = ctx.table(space);
  const Mesh& mesh = *ctx.mesh;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dm.num_global);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geom(mesh, t);
    for (int q = 0; q < ctx.quad.size(); ++q) {
      const double w = ctx.quad.weights[q] * geom.det;
      const Eigen::Vector2d x = geom.map(ctx.quad.points[q]);
      const Eigen::Vector2d fx = f(x, time);
      for (int c = 0; c < dm.components; ++c)
        for (int k = 0; k < tab.n_local; ++k)
          b[dm.global_index(mesh, t, c, k)] += w * fx[c] * tab.values[q][k];
    }
  }
  return b;
}

/// Integrals of the pressure basis functions (the zero-mean gauge weights).
inline Eigen::VectorXd assemble_pressure_weights(const FormContext& ctx) {
  const DofMap& pres = *ctx.pressure;
  const Mesh& mesh = *ctx.mesh;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(pres.num_global);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geom(mesh, t);
    for (int q = 0; q < ctx.quad.size(); ++q)
      for (int k = 0; k < ctx.pres_table.n_local; ++k)
        w[pres.global_index(mesh, t, 0, k)] +=
            ctx.quad.weights[q] * geom.det * ctx.pres_table.values[q][k];
  }
  return w;
}

/// Natural (traction) boundary load on the velocity space:
/// -int_Gamma p_d (v . n) ds over the edges carrying the given tags.
inline Eigen::VectorXd assemble_traction_load(
    const FormContext& ctx, const std::array<bool, 4>& tags,
    const std::function<double(const Eigen::Vector2d&)>& p_d) {
  const DofMap& vel = *ctx.velocity;
  const Mesh& mesh = *ctx.mesh;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(vel.num_global);
  // 8-point Gauss on each edge: plenty for the smooth traction data
  std::vector<double> gx, gw;
  detail::gauss_legendre_01(8, gx, gw);
  for (const auto& e : mesh.boundary_edges) {
    if (!tags[static_cast<int>(e.tag)]) continue;
    const Eigen::Vector2d a = mesh.vertices[e.v0];
    const Eigen::Vector2d bb = mesh.vertices[e.v1];
    const double len = (bb - a).norm();
    const Eigen::Vector2d n = outward_normal(e.tag);
    for (size_t q = 0; q < gx.size(); ++q) {
      const double s = gx[q];
      const Eigen::Vector2d x = a + s * (bb - a);
      const double pd = p_d(x);
      for (int c = 0; c < 2; ++c) {
        if (n[c] == 0.0) continue;
        b[vel.vertex_dof(c, e.v0)] += -pd * n[c] * (1.0 - s) * gw[q] * len;
        b[vel.vertex_dof(c, e.v1)] += -pd * n[c] * s * gw[q] * len;
      }
    }
  }
  return b;
}

}  // namespace mhd
