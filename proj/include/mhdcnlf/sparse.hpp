#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace mhd {

struct TripletBuffer {
  Eigen::Index nrows = 0, ncols = 0;
  std::vector<Eigen::Triplet<double>> entries;

  TripletBuffer() = default;
  TripletBuffer(Eigen::Index r, Eigen::Index c) : nrows(r), ncols(c) {}

  void add(Eigen::Index r, Eigen::Index c, double v) { entries.emplace_back(r, c, v); }
};

/// Compressed sparse row matrix. Column indices are sorted and unique within
/// each row after finalization; duplicates in the triplet input are summed.
class CsrMatrix {
 public:
  using Storage = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  CsrMatrix() = default;
  explicit CsrMatrix(Storage m) : m_(std::move(m)) { m_.makeCompressed(); }
  CsrMatrix(Eigen::Index rows, Eigen::Index cols) : m_(rows, cols) { m_.makeCompressed(); }

  Eigen::Index rows() const { return m_.rows(); }
  Eigen::Index cols() const { return m_.cols(); }
  Eigen::Index nnz() const { return m_.nonZeros(); }

  std::span<const Storage::StorageIndex> row_offsets() const {
    return {m_.outerIndexPtr(), static_cast<size_t>(m_.rows() + 1)};
  }
  std::span<const Storage::StorageIndex> col_indices() const {
    return {m_.innerIndexPtr(), static_cast<size_t>(m_.nonZeros())};
  }
  std::span<const double> values() const {
    return {m_.valuePtr(), static_cast<size_t>(m_.nonZeros())};
  }

  Eigen::VectorXd matvec(const Eigen::VectorXd& x) const { return m_ * x; }
  Eigen::VectorXd matvec_transposed(const Eigen::VectorXd& x) const {
    return m_.transpose() * x;
  }

  CsrMatrix transposed() const { return CsrMatrix(Storage(m_.transpose())); }

  CsrMatrix scaled(double a) const {
    Storage s = m_;
    s *= a;
    return CsrMatrix(std::move(s));
  }

  /// this + a * other (pattern union).
  CsrMatrix plus(const CsrMatrix& other, double a = 1.0) const {
    return CsrMatrix(Storage(m_ + a * other.m_));
  }

  const Storage& eigen() const { return m_; }
  Storage& eigen() { return m_; }

 private:
  Storage m_;
};

inline CsrMatrix finalize(const TripletBuffer& buf, Eigen::Index nrows, Eigen::Index ncols) {
  for (const auto& t : buf.entries)
    if (t.row() < 0 || t.row() >= nrows || t.col() < 0 || t.col() >= ncols)
      throw std::out_of_range("finalize: triplet index out of range");
  CsrMatrix::Storage m(nrows, ncols);
  m.setFromTriplets(buf.entries.begin(), buf.entries.end());
  m.makeCompressed();
  return CsrMatrix(std::move(m));
}

inline CsrMatrix finalize(const TripletBuffer& buf) { return finalize(buf, buf.nrows, buf.ncols); }

/// Row/column elimination for essential constraints: constrained rows become
/// identity rows carrying the prescribed value, and the matching columns are
/// moved to the right-hand side. Values are zeroed in place so the sparsity
/// pattern survives across time steps. The operation is idempotent.
inline void apply_dirichlet(CsrMatrix& A, Eigen::VectorXd& rhs, const std::vector<char>& mask,
                            const Eigen::VectorXd& values) {
  auto& m = A.eigen();
  if (static_cast<Eigen::Index>(mask.size()) != m.rows())
    throw std::invalid_argument("apply_dirichlet: mask size mismatch");
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (CsrMatrix::Storage::InnerIterator it(m, r); it; ++it) {
      const Eigen::Index c = it.col();
      if (mask[r]) {
        it.valueRef() = (c == r) ? 1.0 : 0.0;
      } else if (mask[c]) {
        rhs[r] -= it.value() * values[c];
        it.valueRef() = 0.0;
      }
    }
    if (mask[r]) rhs[r] = values[r];
  }
}

struct SolveReport {
  bool converged = false;
  double rel_residual = 0.0;
  int iterations = 0;
  Eigen::Index dim = 0;
  std::string diagnostic;
};

/// Sparse direct factorization with the symbolic analysis cached across
/// solves that share a sparsity pattern (the CNLF time loop refreshes only
/// the frozen-field values).
class DirectSolver {
 public:
  SolveReport solve(const CsrMatrix& A, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                    double tolerance = 1e-10) {
    SolveReport rep;
    rep.dim = A.rows();
    Eigen::SparseMatrix<double> acol = A.eigen();
    acol.makeCompressed();
    if (!pattern_matches(acol)) {
      lu_.analyzePattern(acol);
      cache_pattern(acol);
    }
    lu_.factorize(acol);
    if (lu_.info() != Eigen::Success) {
      rep.diagnostic = "factorization failed (singular or structurally deficient matrix)";
      return rep;
    }
    x = lu_.solve(b);
    const double bnorm = b.norm();
    rep.rel_residual = (A.matvec(x) - b).norm() / (bnorm > 0.0 ? bnorm : 1.0);
    rep.converged = rep.rel_residual <= tolerance;
    if (!rep.converged) rep.diagnostic = "residual above tolerance";
    return rep;
  }

 private:
  bool pattern_matches(const Eigen::SparseMatrix<double>& a) const {
    if (outer_.empty() || a.rows() != nrows_ || a.nonZeros() != static_cast<Eigen::Index>(inner_.size()))
      return false;
    return std::equal(outer_.begin(), outer_.end(), a.outerIndexPtr()) &&
           std::equal(inner_.begin(), inner_.end(), a.innerIndexPtr());
  }

  void cache_pattern(const Eigen::SparseMatrix<double>& a) {
    nrows_ = a.rows();
    outer_.assign(a.outerIndexPtr(), a.outerIndexPtr() + a.cols() + 1);
    inner_.assign(a.innerIndexPtr(), a.innerIndexPtr() + a.nonZeros());
  }

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
  std::vector<int> outer_, inner_;
  Eigen::Index nrows_ = 0;
};

/// Block-diagonal preconditioner for the saddle-point operator: the diagonal
/// blocks named by the caller are factored directly, everything else acts as
/// identity (the pressure block has no diagonal).
class BlockDiagonalPreconditioner {
 public:
  void add_block(Eigen::Index offset, const CsrMatrix& block) {
    auto lu = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
    Eigen::SparseMatrix<double> acol = block.eigen();
    lu->compute(acol);
    if (lu->info() != Eigen::Success)
      throw std::runtime_error("BlockDiagonalPreconditioner: block factorization failed");
    blocks_.push_back({offset, block.rows(), std::move(lu)});
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& r) const {
    Eigen::VectorXd z = r;
    for (const auto& b : blocks_)
      z.segment(b.offset, b.size) = b.lu->solve(r.segment(b.offset, b.size));
    return z;
  }

  bool empty() const { return blocks_.empty(); }

 private:
  struct Block {
    Eigen::Index offset, size;
    std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu;
  };
  std::vector<Block> blocks_;
};

/// Restarted GMRES with right preconditioning.
inline SolveReport gmres_solve(const CsrMatrix& A, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                               const BlockDiagonalPreconditioner& prec, double tolerance,
                               int max_iterations, int restart = 50) {
  SolveReport rep;
  rep.dim = A.rows();
  const Eigen::Index n = A.rows();
  const double bnorm = b.norm() > 0.0 ? b.norm() : 1.0;
  if (x.size() != n) x = Eigen::VectorXd::Zero(n);

  auto precondition = [&](const Eigen::VectorXd& v) {
    return prec.empty() ? v : prec.apply(v);
  };

  int total_it = 0;
  while (total_it < max_iterations) {
    Eigen::VectorXd r = b - A.matvec(x);
    double beta = r.norm();
    rep.rel_residual = beta / bnorm;
    if (rep.rel_residual <= tolerance) {
      rep.converged = true;
      rep.iterations = total_it;
      return rep;
    }
    const int m = std::min(restart, max_iterations - total_it);
    Eigen::MatrixXd V(n, m + 1);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
    std::vector<double> cs(m, 0.0), sn(m, 0.0);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(m + 1);
    V.col(0) = r / beta;
    g[0] = beta;
    int k = 0;
    for (; k < m; ++k) {
      Eigen::VectorXd w = A.matvec(precondition(V.col(k)));
      for (int i = 0; i <= k; ++i) {
        H(i, k) = w.dot(V.col(i));
        w -= H(i, k) * V.col(i);
      }
      H(k + 1, k) = w.norm();
      if (H(k + 1, k) > 0.0) V.col(k + 1) = w / H(k + 1, k);
      // Givens rotations keep the least-squares problem triangular
      for (int i = 0; i < k; ++i) {
        const double t = cs[i] * H(i, k) + sn[i] * H(i + 1, k);
        H(i + 1, k) = -sn[i] * H(i, k) + cs[i] * H(i + 1, k);
        H(i, k) = t;
      }
      const double denom = std::hypot(H(k, k), H(k + 1, k));
      if (denom == 0.0) break;
      cs[k] = H(k, k) / denom;
      sn[k] = H(k + 1, k) / denom;
      H(k, k) = denom;
      H(k + 1, k) = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];
      ++total_it;
      if (std::abs(g[k + 1]) / bnorm <= tolerance) {
        ++k;
        break;
      }
    }
    Eigen::VectorXd y = Eigen::VectorXd::Zero(k);
    for (int i = k - 1; i >= 0; --i) {
      double s = g[i];
      for (int j = i + 1; j < k; ++j) s -= H(i, j) * y[j];
      y[i] = s / H(i, i);
    }
    Eigen::VectorXd update = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < k; ++i) update += y[i] * V.col(i);
    x += precondition(update);
    if (k == 0) break;
  }
  Eigen::VectorXd r = b - A.matvec(x);
  rep.rel_residual = r.norm() / bnorm;
  rep.iterations = total_it;
  rep.converged = rep.rel_residual <= tolerance;
  if (!rep.converged) rep.diagnostic = "gmres: no convergence within iteration budget";
  return rep;
}

/// Saddle-point system over the block layout
/// [velocity | pressure | magnetic | optional mean-pressure multiplier].
class BlockSystem {
 public:
  explicit BlockSystem(std::vector<Eigen::Index> dims) : dims_(std::move(dims)) {
    offsets_.resize(dims_.size() + 1, 0);
    for (size_t i = 0; i < dims_.size(); ++i) offsets_[i + 1] = offsets_[i] + dims_[i];
    rhs_ = Eigen::VectorXd::Zero(offsets_.back());
    mask_.assign(offsets_.back(), 0);
    values_ = Eigen::VectorXd::Zero(offsets_.back());
  }

  int num_blocks() const { return static_cast<int>(dims_.size()); }
  Eigen::Index block_dim(int b) const { return dims_[b]; }
  Eigen::Index offset(int b) const { return offsets_[b]; }
  Eigen::Index total_dim() const { return offsets_.back() + (has_mean_constraint_ ? 1 : 0); }

  void set_block(int i, int j, CsrMatrix a) {
    if (a.rows() != dims_[i] || a.cols() != dims_[j])
      throw std::invalid_argument("BlockSystem::set_block: dimension mismatch");
    entries_.push_back({i, j, std::move(a)});
  }

  Eigen::Ref<Eigen::VectorXd> rhs_block(int b) { return rhs_.segment(offsets_[b], dims_[b]); }

  void set_dirichlet(int b, const std::vector<char>& mask, const Eigen::VectorXd& values) {
    if (static_cast<Eigen::Index>(mask.size()) != dims_[b] || values.size() != dims_[b])
      throw std::invalid_argument("BlockSystem::set_dirichlet: size mismatch");
    std::copy(mask.begin(), mask.end(), mask_.begin() + offsets_[b]);
    values_.segment(offsets_[b], dims_[b]) = values;
  }

  /// Appends a scalar Lagrange multiplier row/column enforcing w^T p = 0.
  void add_mean_constraint(int pressure_block, Eigen::VectorXd weights) {
    if (weights.size() != dims_[pressure_block])
      throw std::invalid_argument("BlockSystem::add_mean_constraint: weight size mismatch");
    has_mean_constraint_ = true;
    constraint_block_ = pressure_block;
    constraint_weights_ = std::move(weights);
  }

  bool has_mean_constraint() const { return has_mean_constraint_; }

  CsrMatrix monolithic() const {
    TripletBuffer buf(total_dim(), total_dim());
    for (const auto& e : entries_) {
      const Eigen::Index r0 = offsets_[e.i], c0 = offsets_[e.j];
      const auto& m = e.a.eigen();
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (CsrMatrix::Storage::InnerIterator it(m, r); it; ++it)
          buf.add(r0 + r, c0 + it.col(), it.value());
    }
    if (has_mean_constraint_) {
      const Eigen::Index p0 = offsets_[constraint_block_];
      const Eigen::Index mrow = total_dim() - 1;
      for (Eigen::Index q = 0; q < constraint_weights_.size(); ++q) {
        buf.add(mrow, p0 + q, constraint_weights_[q]);
        buf.add(p0 + q, mrow, constraint_weights_[q]);
      }
    }
    return finalize(buf);
  }

  Eigen::VectorXd full_rhs() const {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(total_dim());
    b.head(rhs_.size()) = rhs_;
    return b;
  }

  std::vector<char> full_mask() const {
    std::vector<char> m(total_dim(), 0);
    std::copy(mask_.begin(), mask_.end(), m.begin());
    return m;
  }

  Eigen::VectorXd full_values() const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(total_dim());
    v.head(values_.size()) = values_;
    return v;
  }

 private:
  struct Entry {
    int i, j;
    CsrMatrix a;
  };
  std::vector<Eigen::Index> dims_, offsets_;
  std::vector<Entry> entries_;
  Eigen::VectorXd rhs_;
  std::vector<char> mask_;
  Eigen::VectorXd values_;
  bool has_mean_constraint_ = false;
  int constraint_block_ = 0;
  Eigen::VectorXd constraint_weights_;
};

/// Assembles the monolithic operator, eliminates constraints and solves.
inline SolveReport solve(const BlockSystem& system, Eigen::VectorXd& x, DirectSolver& solver,
                         double tolerance = 1e-10) {
  CsrMatrix a = system.monolithic();
  Eigen::VectorXd b = system.full_rhs();
  apply_dirichlet(a, b, system.full_mask(), system.full_values());
  return solver.solve(a, b, x, tolerance);
}

}  // namespace mhd
