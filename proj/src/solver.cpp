#include "cutfem/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <chrono>
#include <cmath>

namespace cutfem {

void sgs_sweep(const SparseMatrix& m, std::span<const double> r, std::span<double> z) {
  const auto off = m.offsets();
  const auto col = m.columns();
  const auto val = m.values();
  const int n = m.rows();
  auto relax = [&](int i) {
    double s = r[i];
    double d = 0.0;
    for (int k = off[i]; k < off[i + 1]; ++k) {
      if (col[k] == i) d = val[k];
      else s -= val[k] * z[col[k]];
    }
    if (d == 0.0) throw SolverError("symmetric Gauss-Seidel: zero diagonal entry");
    z[i] = s / d;
  };
  for (int i = 0; i < n; ++i) relax(i);
  for (int i = n - 1; i >= 0; --i) relax(i);
}

SgsPreconditioner::SgsPreconditioner(const SparseMatrix& m, int iterations) : m_(m), iterations_(iterations) {
  for (double d : m_.diagonal())
    if (d == 0.0) throw SolverError("symmetric Gauss-Seidel: zero diagonal entry");
}

void SgsPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
  std::fill(z.begin(), z.end(), 0.0);
  for (int it = 0; it < iterations_; ++it) sgs_sweep(m_, r, z);
}

struct CholeskySolver::Impl {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
};

CholeskySolver::CholeskySolver(const SparseMatrix& m) : impl_(std::make_unique<Impl>()), n_(m.rows()) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(m.nnz());
  const auto off = m.offsets();
  const auto col = m.columns();
  const auto val = m.values();
  for (int i = 0; i < m.rows(); ++i)
    for (int k = off[i]; k < off[i + 1]; ++k) t.emplace_back(i, col[k], val[k]);
  Eigen::SparseMatrix<double> e(m.rows(), m.cols());
  e.setFromTriplets(t.begin(), t.end());
  impl_->ldlt.compute(e);
  if (impl_->ldlt.info() != Eigen::Success) throw SolverError("Cholesky: factorization failed");
  const auto d = impl_->ldlt.vectorD();
  for (int i = 0; i < d.size(); ++i)
    if (!(d[i] > 0.0)) throw SolverError("Cholesky: matrix is not positive definite");
}

CholeskySolver::~CholeskySolver() = default;
CholeskySolver::CholeskySolver(CholeskySolver&&) noexcept = default;
CholeskySolver& CholeskySolver::operator=(CholeskySolver&&) noexcept = default;

void CholeskySolver::apply(std::span<const double> r, std::span<double> z) const {
  Eigen::Map<const Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(r.size()));
  Eigen::Map<Eigen::VectorXd> zv(z.data(), static_cast<Eigen::Index>(z.size()));
  zv = impl_->ldlt.solve(rv);
}

BlockJacobi::BlockJacobi(std::shared_ptr<const LinearOperator> p0, std::shared_ptr<const LinearOperator> p1)
    : p0_(std::move(p0)), p1_(std::move(p1)) {}

void BlockJacobi::apply(std::span<const double> r, std::span<double> z) const {
  const std::size_t n0 = p0_->size();
  p0_->apply(r.subspan(0, n0), z.subspan(0, n0));
  if (p1_->size() > 0) p1_->apply(r.subspan(n0), z.subspan(n0));
}

SolveReport pcg(const LinearOperator& a, std::span<const double> b, const LinearOperator& p, std::span<double> x,
                double tol, int max_iter) {
  const auto start = std::chrono::steady_clock::now();
  const int n = a.size();
  SolveReport rep;
  std::fill(x.begin(), x.end(), 0.0);
  Vector r(b.begin(), b.end()), z(n), d(n), q(n);
  p.apply(r, z);
  const double z0 = norm2(z);
  rep.residual_history.push_back(1.0);
  if (z0 == 0.0) {
    rep.converged = true;
    return rep;
  }
  double rz = dot(r, z);
  if (!(rz > 0.0)) throw SolverError("pcg: <r, P^{-1} r> <= 0, preconditioner not SPD");
  d = z;
  for (int k = 1; k <= max_iter; ++k) {
    a.apply(d, q);
    const double dq = dot(d, q);
    if (!(dq > 0.0)) throw SolverError("pcg: <p, A p> <= 0, operator not SPD");
    const double alpha = rz / dq;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * d[i];
      r[i] -= alpha * q[i];
    }
    p.apply(r, z);
    const double rel = norm2(z) / z0;
    rep.residual_history.push_back(rel);
    rep.iterations = k;
    if (rel <= tol) {
      rep.converged = true;
      break;
    }
    const double rz_new = dot(r, z);
    if (!(rz_new > 0.0)) throw SolverError("pcg: <r, P^{-1} r> <= 0, preconditioner not SPD");
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) d[i] = z[i] + beta * d[i];
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace cutfem
