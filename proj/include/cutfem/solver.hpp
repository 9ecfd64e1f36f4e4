#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cutfem/sparse.hpp"

namespace cutfem {

/// Raised when a Krylov method or a factorization detects a non-SPD operator.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear map x -> y; preconditioners implement y = P^{-1} x.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual int size() const = 0;
  virtual void apply(std::span<const double> x, std::span<double> y) const = 0;

  Vector operator()(std::span<const double> x) const {
    Vector y(size());
    apply(x, y);
    return y;
  }
};

class MatrixOperator final : public LinearOperator {
 public:
  explicit MatrixOperator(const SparseMatrix& a) : a_(a) {}
  int size() const override { return a_.rows(); }
  void apply(std::span<const double> x, std::span<double> y) const override { a_.multiply(x, y); }

 private:
  const SparseMatrix& a_;
};

class IdentityOperator final : public LinearOperator {
 public:
  explicit IdentityOperator(int n) : n_(n) {}
  int size() const override { return n_; }
  void apply(std::span<const double> x, std::span<double> y) const override {
    std::copy(x.begin(), x.end(), y.begin());
  }

 private:
  int n_;
};

/// One symmetric Gauss-Seidel iteration (forward then backward sweep, natural
/// ordering) for M z = r, updating z in place.
void sgs_sweep(const SparseMatrix& m, std::span<const double> r, std::span<double> z);

/// z = result of `iterations` symmetric Gauss-Seidel iterations from z = 0.
/// Throws SolverError on a zero diagonal entry.
class SgsPreconditioner final : public LinearOperator {
 public:
  explicit SgsPreconditioner(const SparseMatrix& m, int iterations = 1);
  int size() const override { return m_.rows(); }
  void apply(std::span<const double> r, std::span<double> z) const override;

 private:
  const SparseMatrix& m_;
  int iterations_;
};

/// Exact solve by sparse LDL^T factorization (AMD ordering).
class CholeskySolver final : public LinearOperator {
 public:
  explicit CholeskySolver(const SparseMatrix& m);
  ~CholeskySolver() override;
  CholeskySolver(CholeskySolver&&) noexcept;
  CholeskySolver& operator=(CholeskySolver&&) noexcept;

  int size() const override { return n_; }
  void apply(std::span<const double> r, std::span<double> z) const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_ = 0;
};

/// blockdiag(P0^{-1}, P1^{-1}) on the split (x0 | x1) vector.
class BlockJacobi final : public LinearOperator {
 public:
  BlockJacobi(std::shared_ptr<const LinearOperator> p0, std::shared_ptr<const LinearOperator> p1);
  int size() const override { return p0_->size() + p1_->size(); }
  void apply(std::span<const double> r, std::span<double> z) const override;

 private:
  std::shared_ptr<const LinearOperator> p0_;
  std::shared_ptr<const LinearOperator> p1_;
};

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  /// ||P^{-1} r_k||_2 / ||P^{-1} r_0||_2, k = 0..iterations
  std::vector<double> residual_history;
  double seconds = 0.0;
};

/// Preconditioned CG from x = 0, stopped when ||P^{-1}(A x_k - b)||_2 <= tol ||P^{-1}(A x_0 - b)||_2.
/// Throws SolverError if <r, P^{-1} r> <= 0 or <p, A p> <= 0.
SolveReport pcg(const LinearOperator& a, std::span<const double> b, const LinearOperator& p, std::span<double> x,
                double tol = 1e-6, int max_iter = 10000);

}  // namespace cutfem
