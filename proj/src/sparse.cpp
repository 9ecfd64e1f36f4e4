#include "cutfem/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace cutfem {

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::vector<Triplet> entries) {
  // Counting sort by row keeps the input order within each row.
  SparseMatrix m(rows, cols);
  std::vector<int> count(rows + 1, 0);
  for (const auto& e : entries) {
    if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols)
      throw std::out_of_range("SparseMatrix::from_triplets: index out of range");
    ++count[e.row + 1];
  }
  for (int i = 0; i < rows; ++i) count[i + 1] += count[i];
  std::vector<Triplet> by_row(entries.size());
  {
    std::vector<int> pos(count.begin(), count.end() - 1);
    for (const auto& e : entries) by_row[pos[e.row]++] = e;
  }
  entries.clear();
  entries.shrink_to_fit();

  m.columns_.reserve(by_row.size());
  m.values_.reserve(by_row.size());
  for (int i = 0; i < rows; ++i) {
    auto first = by_row.begin() + count[i];
    auto last = by_row.begin() + count[i + 1];
    std::stable_sort(first, last, [](const Triplet& a, const Triplet& b) { return a.col < b.col; });
    for (auto it = first; it != last;) {
      double v = 0.0;
      const int c = it->col;
      for (; it != last && it->col == c; ++it) v += it->value;
      m.columns_.push_back(c);
      m.values_.push_back(v);
    }
    m.offsets_[i + 1] = static_cast<int>(m.columns_.size());
  }
  return m;
}

SparseMatrix SparseMatrix::identity(int n) {
  SparseMatrix m(n, n);
  m.columns_.resize(n);
  m.values_.assign(n, 1.0);
  for (int i = 0; i < n; ++i) {
    m.columns_[i] = i;
    m.offsets_[i + 1] = i + 1;
  }
  return m;
}

SparseMatrix SparseMatrix::from_csr(int rows, int cols, std::vector<int> offsets, std::vector<int> columns,
                                    std::vector<double> values) {
  if (static_cast<int>(offsets.size()) != rows + 1 || columns.size() != values.size() ||
      offsets.back() != static_cast<int>(columns.size()))
    throw std::invalid_argument("SparseMatrix::from_csr: inconsistent arrays");
  SparseMatrix m(rows, cols);
  m.offsets_ = std::move(offsets);
  m.columns_ = std::move(columns);
  m.values_ = std::move(values);
  return m;
}

double SparseMatrix::at(int i, int j) const {
  const auto first = columns_.begin() + offsets_[i];
  const auto last = columns_.begin() + offsets_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[it - columns_.begin()];
}

Vector SparseMatrix::diagonal() const {
  Vector d(std::min(rows_, cols_), 0.0);
  for (int i = 0; i < static_cast<int>(d.size()); ++i) d[i] = at(i, i);
  return d;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (static_cast<int>(x.size()) != cols_ || static_cast<int>(y.size()) != rows_)
    throw std::invalid_argument("SparseMatrix::multiply: dimension mismatch");
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int k = offsets_[i]; k < offsets_[i + 1]; ++k) s += values_[k] * x[columns_[k]];
    y[i] = s;
  }
}

Vector SparseMatrix::operator*(std::span<const double> x) const {
  Vector y(rows_);
  multiply(x, y);
  return y;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows_);
  for (int c : columns_) ++t.offsets_[c + 1];
  for (int i = 0; i < cols_; ++i) t.offsets_[i + 1] += t.offsets_[i];
  t.columns_.resize(columns_.size());
  t.values_.resize(values_.size());
  std::vector<int> pos(t.offsets_.begin(), t.offsets_.end() - 1);
  for (int i = 0; i < rows_; ++i)
    for (int k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      const int p = pos[columns_[k]]++;
      t.columns_[p] = i;
      t.values_[p] = values_[k];
    }
  return t;
}

SparseMatrix SparseMatrix::submatrix(std::span<const int> r, std::span<const int> c) const {
  std::vector<int> col_map(cols_, -1);
  for (int j = 0; j < static_cast<int>(c.size()); ++j) col_map[c[j]] = j;
  std::vector<Triplet> e;
  for (int i = 0; i < static_cast<int>(r.size()); ++i) {
    const int row = r[i];
    for (int k = offsets_[row]; k < offsets_[row + 1]; ++k)
      if (const int j = col_map[columns_[k]]; j >= 0) e.push_back({i, j, values_[k]});
  }
  return from_triplets(static_cast<int>(r.size()), static_cast<int>(c.size()), std::move(e));
}

bool SparseMatrix::is_symmetric(double tol) const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      const double a = values_[k];
      if (std::abs(a - at(columns_[k], i)) > tol * (1.0 + std::abs(a))) return false;
    }
  return true;
}

void SparseMatrix::write_matrix_market(std::ostream& out) const {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << rows_ << ' ' << cols_ << ' ' << nnz() << '\n';
  out.precision(17);
  for (int i = 0; i < rows_; ++i)
    for (int k = offsets_[i]; k < offsets_[i + 1]; ++k)
      out << i + 1 << ' ' << columns_[k] + 1 << ' ' << values_[k] << '\n';
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: dimension mismatch");
  const auto ao = a.offsets(), ac = a.columns();
  const auto bo = b.offsets(), bc = b.columns();
  const auto av = a.values(), bv = b.values();
  const int n = a.rows(), m = b.cols();

  // Symbolic pass: row structure of the product.
  std::vector<int> marker(m, -1);
  std::vector<int> offsets(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    int count = 0;
    for (int k = ao[i]; k < ao[i + 1]; ++k)
      for (int l = bo[ac[k]]; l < bo[ac[k] + 1]; ++l)
        if (marker[bc[l]] != i) {
          marker[bc[l]] = i;
          ++count;
        }
    offsets[i + 1] = offsets[i] + count;
  }

  // Numeric pass with a dense accumulator per row.
  std::vector<int> columns(offsets[n]);
  std::vector<double> values(offsets[n]);
  std::vector<double> acc(m, 0.0);
  std::fill(marker.begin(), marker.end(), -1);
  for (int i = 0; i < n; ++i) {
    int p = offsets[i];
    for (int k = ao[i]; k < ao[i + 1]; ++k)
      for (int l = bo[ac[k]]; l < bo[ac[k] + 1]; ++l) {
        const int j = bc[l];
        if (marker[j] != i) {
          marker[j] = i;
          columns[p++] = j;
          acc[j] = 0.0;
        }
        acc[j] += av[k] * bv[l];
      }
    std::sort(columns.begin() + offsets[i], columns.begin() + offsets[i + 1]);
    for (int q = offsets[i]; q < offsets[i + 1]; ++q) values[q] = acc[columns[q]];
  }

  return SparseMatrix::from_csr(n, m, std::move(offsets), std::move(columns), std::move(values));
}

SparseMatrix galerkin_product(const SparseMatrix& a, const SparseMatrix& p) {
  return multiply(p.transpose(), multiply(a, p));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace cutfem
