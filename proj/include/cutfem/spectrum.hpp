#pragma once

#include <string>

#include "cutfem/solver.hpp"
#include "cutfem/sparse.hpp"

namespace cutfem {

struct SpectrumEstimate {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double kappa = 0.0;
  int iterations = 0;
  /// False when Lanczos ran out of budget; kappa is then a lower bound.
  bool converged = true;
  std::string method;
};

/// Extreme eigenvalues of a symmetric matrix by a dense eigensolver.
SpectrumEstimate dense_spectrum(const SparseMatrix& a);
/// Extreme eigenvalues of K x = lambda M x, M SPD, by a dense solver.
SpectrumEstimate dense_generalized_spectrum(const SparseMatrix& k, const SparseMatrix& m);

struct LanczosSettings {
  int max_iter = 0;               // 0: min(5 n, 2000)
  double tol = 1e-6;              // relative Ritz residual for both extremes
  int check_every = 10;
  unsigned seed = 12345;
};

/// Lanczos with full reorthogonalization for M^{-1} K in the M inner product.
/// Pass m == nullptr and m_inv == nullptr for the standard problem.
SpectrumEstimate lanczos_spectrum(const LinearOperator& k, const LinearOperator* m, const LinearOperator* m_inv,
                                  const LanczosSettings& settings = {});

/// Dense below `dense_limit` unknowns, Lanczos above.
SpectrumEstimate estimate_condition(const SparseMatrix& a, int dense_limit = 3000);
/// Spectrum of M^{-1} A; `m_inv` must apply M^{-1} exactly.
SpectrumEstimate estimate_condition(const SparseMatrix& a, const SparseMatrix& m, const LinearOperator& m_inv,
                                    int dense_limit = 3000);

/// D^{-1/2} A D^{-1/2} for a positive diagonal d.
SparseMatrix symmetric_diagonal_scaling(const SparseMatrix& a, const Vector& d);

}  // namespace cutfem
