#include "cutfem/spectrum.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

namespace cutfem {

namespace {

Eigen::MatrixXd to_dense(const SparseMatrix& a) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  const auto off = a.offsets();
  const auto col = a.columns();
  const auto val = a.values();
  for (int i = 0; i < a.rows(); ++i)
    for (int k = off[i]; k < off[i + 1]; ++k) d(i, col[k]) = val[k];
  return d;
}

SpectrumEstimate finish(double lo, double hi, std::string method) {
  SpectrumEstimate s;
  s.lambda_min = lo;
  s.lambda_max = hi;
  s.kappa = hi / lo;
  s.method = std::move(method);
  return s;
}

}  // namespace

SpectrumEstimate dense_spectrum(const SparseMatrix& a) {
  if (a.rows() == 0) return finish(1.0, 1.0, "dense");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_dense(a), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return finish(ev[0], ev[ev.size() - 1], "dense");
}

SpectrumEstimate dense_generalized_spectrum(const SparseMatrix& k, const SparseMatrix& m) {
  if (k.rows() == 0) return finish(1.0, 1.0, "dense-generalized");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(to_dense(k), to_dense(m), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return finish(ev[0], ev[ev.size() - 1], "dense-generalized");
}

SpectrumEstimate lanczos_spectrum(const LinearOperator& k, const LinearOperator* m, const LinearOperator* m_inv,
                                  const LanczosSettings& settings) {
  const int n = k.size();
  const int budget = settings.max_iter > 0 ? settings.max_iter : std::min(5 * n, 2000);
  auto apply_m = [&](const Vector& x, Vector& y) {
    if (m) m->apply(x, y);
    else y = x;
  };
  auto apply_minv = [&](const Vector& x, Vector& y) {
    if (m_inv) m_inv->apply(x, y);
    else y = x;
  };

  std::mt19937 rng(settings.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector r(n), mr(n);
  for (double& v : r) v = dist(rng);
  apply_m(r, mr);
  double beta = std::sqrt(dot(r, mr));

  std::vector<Vector> q, mq;  // basis and M times basis
  std::vector<double> alphas, betas;
  Vector u(n), z(n), mz(n);
  SpectrumEstimate est;
  est.method = "lanczos";
  est.converged = false;

  for (int j = 0; j < budget && j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      r[i] /= beta;
      mr[i] /= beta;
    }
    q.push_back(r);
    mq.push_back(mr);
    k.apply(q.back(), u);
    apply_minv(u, z);
    const double alpha = dot(q.back(), u);
    alphas.push_back(alpha);
    for (int i = 0; i < n; ++i) z[i] -= alpha * q[j][i] + (j > 0 ? betas[j - 1] * q[j - 1][i] : 0.0);
    // Full reorthogonalization in the M inner product, two passes.
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t l = 0; l < q.size(); ++l) {
        const double c = dot(mq[l], z);
        for (int i = 0; i < n; ++i) z[i] -= c * q[l][i];
      }
    apply_m(z, mz);
    beta = std::sqrt(std::max(dot(z, mz), 0.0));

    const int size = j + 1;
    const bool last = size == budget || size == n || beta == 0.0;
    if (size % settings.check_every == 0 || last) {
      Eigen::VectorXd diag(size), sub(std::max(size - 1, 1));
      for (int i = 0; i < size; ++i) diag[i] = alphas[i];
      for (int i = 0; i + 1 < size; ++i) sub[i] = betas[i];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      es.computeFromTridiagonal(diag, sub.head(std::max(size - 1, 0)), Eigen::ComputeEigenvectors);
      const auto& ev = es.eigenvalues();
      const auto& evec = es.eigenvectors();
      const double lo = ev[0], hi = ev[size - 1];
      const double res_lo = beta * std::abs(evec(size - 1, 0));
      const double res_hi = beta * std::abs(evec(size - 1, size - 1));
      est.lambda_min = lo;
      est.lambda_max = hi;
      est.kappa = hi / lo;
      est.iterations = size;
      if ((res_lo <= settings.tol * std::abs(lo) && res_hi <= settings.tol * std::abs(hi)) || beta == 0.0 ||
          size == n) {
        est.converged = true;
        return est;
      }
      if (last) return est;
    }
    betas.push_back(beta);
    r = z;
    mr = mz;
  }
  return est;
}

SpectrumEstimate estimate_condition(const SparseMatrix& a, int dense_limit) {
  if (a.rows() <= dense_limit) return dense_spectrum(a);
  MatrixOperator op(a);
  return lanczos_spectrum(op, nullptr, nullptr);
}

SpectrumEstimate estimate_condition(const SparseMatrix& a, const SparseMatrix& m, const LinearOperator& m_inv,
                                    int dense_limit) {
  if (a.rows() <= dense_limit) return dense_generalized_spectrum(a, m);
  MatrixOperator op(a), mop(m);
  return lanczos_spectrum(op, &mop, &m_inv);
}

SparseMatrix symmetric_diagonal_scaling(const SparseMatrix& a, const Vector& d) {
  std::vector<double> s(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) s[i] = 1.0 / std::sqrt(d[i]);
  std::vector<int> off(a.offsets().begin(), a.offsets().end());
  std::vector<int> col(a.columns().begin(), a.columns().end());
  std::vector<double> val(a.values().begin(), a.values().end());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = off[i]; k < off[i + 1]; ++k) val[k] *= s[i] * s[col[k]];
  return SparseMatrix::from_csr(a.rows(), a.cols(), std::move(off), std::move(col), std::move(val));
}

}  // namespace cutfem
