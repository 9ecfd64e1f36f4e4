#pragma once

#include <iosfwd>
#include <span>
#include <vector>

namespace cutfem {

using Vector = std::vector<double>;

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed sparse row matrix with sorted column indices per row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), offsets_(rows + 1, 0) {}

  /// Sums duplicate entries in input order, so equal inputs give bitwise equal matrices.
  static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> entries);
  static SparseMatrix identity(int n);
  /// Adopts CSR arrays; columns must be sorted within each row.
  static SparseMatrix from_csr(int rows, int cols, std::vector<int> offsets, std::vector<int> columns,
                               std::vector<double> values);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nnz() const { return static_cast<int>(values_.size()); }

  std::span<const int> offsets() const { return offsets_; }
  std::span<const int> columns() const { return columns_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Entry (i, j), zero if not stored.
  double at(int i, int j) const;
  Vector diagonal() const;

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  Vector operator*(std::span<const double> x) const;

  SparseMatrix transpose() const;
  /// Principal/off-diagonal block selection: rows `r`, columns `c` (as given order).
  SparseMatrix submatrix(std::span<const int> r, std::span<const int> c) const;

  /// max |a_ij - a_ji| <= tol * (1 + |a_ij|)
  bool is_symmetric(double tol = 1e-10) const;

  void write_matrix_market(std::ostream& out) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> offsets_{0};
  std::vector<int> columns_;
  std::vector<double> values_;
};

/// C = A B, computed in a symbolic pass followed by a numeric pass.
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);
/// P^T A P
SparseMatrix galerkin_product(const SparseMatrix& a, const SparseMatrix& p);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace cutfem
