#include "cutfem/preconditioners.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace cutfem {

namespace {

class InnerCg final : public LinearOperator {
 public:
  InnerCg(const SparseMatrix& m, double tol) : m_(m), op_(m), sgs_(m), tol_(tol) {}
  int size() const override { return m_.rows(); }
  void apply(std::span<const double> r, std::span<double> z) const override {
    const SolveReport rep = pcg(op_, r, sgs_, z, tol_, 100000);
    if (!rep.converged) throw SolverError("inner CG did not converge");
  }

 private:
  const SparseMatrix& m_;
  MatrixOperator op_;
  SgsPreconditioner sgs_;
  double tol_;
};

// Keeps the operator alive alongside preconditioners that hold references to it.
template <class Op>
class Owning final : public LinearOperator {
 public:
  template <class... Args>
  explicit Owning(SparseMatrix m, Args&&... args) : m_(std::move(m)), op_(m_, std::forward<Args>(args)...) {}
  int size() const override { return op_.size(); }
  void apply(std::span<const double> r, std::span<double> z) const override { op_.apply(r, z); }

 private:
  SparseMatrix m_;
  Op op_;
};

}  // namespace

std::string to_string(PreconditionerKind k) {
  switch (k) {
    case PreconditionerKind::SGS:
      return "P_SGS";
    case PreconditionerKind::BlockExact:
      return "P_A";
    case PreconditionerKind::BlockDiagSGS:
      return "P_D";
    case PreconditionerKind::BlockMGSGS:
      return "P_B";
  }
  return "?";
}

PreconditionerKind parse_preconditioner(const std::string& s) {
  std::string l = s;
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
  if (l == "sgs" || l == "p_sgs") return PreconditionerKind::SGS;
  if (l == "pa" || l == "p_a" || l == "exact") return PreconditionerKind::BlockExact;
  if (l == "pd" || l == "p_d") return PreconditionerKind::BlockDiagSGS;
  if (l == "pb" || l == "p_b" || l == "mg") return PreconditionerKind::BlockMGSGS;
  throw std::invalid_argument("unknown preconditioner '" + s + "'");
}

std::shared_ptr<const LinearOperator> make_exact_solver(const SparseMatrix& m, const PreconditionerSettings& s) {
  if (m.rows() <= s.direct_limit) return std::make_shared<Owning<CholeskySolver>>(m);
  return std::make_shared<Owning<InnerCg>>(m, s.inner_tolerance);
}

std::shared_ptr<const LinearOperator> make_preconditioner(PreconditionerKind kind, const TransformedSystem& sys,
                                                          const std::vector<SparseMatrix>& x0_prolongations,
                                                          const PreconditionerSettings& settings) {
  switch (kind) {
    case PreconditionerKind::SGS:
      return std::make_shared<Owning<SgsPreconditioner>>(sys.Ahat, 1);
    case PreconditionerKind::BlockExact:
      return std::make_shared<BlockJacobi>(make_exact_solver(sys.A0, settings), make_exact_solver(sys.A1, settings));
    case PreconditionerKind::BlockDiagSGS:
      return std::make_shared<BlockJacobi>(make_exact_solver(sys.A0, settings),
                                           std::make_shared<Owning<SgsPreconditioner>>(sys.A1, settings.a1_sgs_iterations));
    case PreconditionerKind::BlockMGSGS:
      return std::make_shared<BlockJacobi>(
          std::make_shared<Multigrid>(sys.A0, x0_prolongations, settings.multigrid),
          std::make_shared<Owning<SgsPreconditioner>>(sys.A1, settings.a1_sgs_iterations));
  }
  throw std::invalid_argument("make_preconditioner: unknown kind");
}

}  // namespace cutfem
