#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cutfem/assembly.hpp"
#include "cutfem/multigrid.hpp"
#include "cutfem/solver.hpp"

namespace cutfem {

enum class PreconditionerKind {
  SGS,           // one SGS iteration on the whole of Ahat
  BlockExact,    // blockdiag(A0, A1), exact block solves
  BlockDiagSGS,  // exact A0 solve, SGS on A1
  BlockMGSGS,    // multigrid V-cycles on A0, SGS on A1
};

std::string to_string(PreconditionerKind k);
/// Accepts "sgs", "PA"/"exact", "PD", "PB" (case-insensitive).
PreconditionerKind parse_preconditioner(const std::string& s);

struct PreconditionerSettings {
  int a1_sgs_iterations = 1;          // B1: SGS iterations on A1
  MultigridSettings multigrid;        // B0
  int direct_limit = 500000;          // exact solves by Cholesky up to this size
  double inner_tolerance = 1e-12;     // inner CG above the limit
};

/// Exact solve: sparse Cholesky up to `direct_limit`, CG with SGS
/// preconditioning to `inner_tolerance` above.
std::shared_ptr<const LinearOperator> make_exact_solver(const SparseMatrix& m, const PreconditionerSettings& s);

/// `x0_prolongations` are the nested interpolations feeding the multigrid for
/// A0 (only needed for BlockMGSGS).
std::shared_ptr<const LinearOperator> make_preconditioner(PreconditionerKind kind, const TransformedSystem& sys,
                                                          const std::vector<SparseMatrix>& x0_prolongations,
                                                          const PreconditionerSettings& settings = {});

}  // namespace cutfem
