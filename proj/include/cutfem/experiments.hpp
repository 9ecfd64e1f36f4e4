#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cutfem/assembly.hpp"
#include "cutfem/config.hpp"
#include "cutfem/geometry.hpp"
#include "cutfem/mesh.hpp"
#include "cutfem/preconditioners.hpp"
#include "cutfem/space.hpp"
#include "cutfem/spectrum.hpp"

namespace cutfem {

/// Exact solution and data of a model problem.  `side` is 1 (inside the ball)
/// or 2 (outside).
struct ManufacturedSolution {
  std::function<double(const Vec3&, int)> u;
  std::function<Vec3(const Vec3&, int)> grad_u;
  std::function<double(const Vec3&, int)> f;

  ProblemData data() const { return {f, u}; }

  /// u_i = (3 y1^2 y2 - y2^3) (exp(1 - |y|^2) - 1) / alpha_i with y = x - center.
  static ManufacturedSolution interface(const Vec3& center, double alpha1, double alpha2);
  /// u = (3 y1^2 y2 - y2^3) exp(1 - |y|^2).
  static ManufacturedSolution fictitious(const Vec3& center);
};

struct ErrorNorms {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double h1 = 0.0;  // sqrt(l2^2 + h1_semi^2)
};

/// Errors of the discrete solution given as per-side vertex values (NaN where
/// inactive) over Omega_1 and Omega_2 (interface) or Omega_1 (FD).
ErrorNorms error_norms(const Mesh& mesh, const CutInfo& cut, ProblemKind kind, const std::array<Vector, 2>& u_h,
                       const ManufacturedSolution& exact, int order = 5);

/// Everything built for one level of one problem.
struct LevelProblem {
  const Mesh* mesh = nullptr;  // owned by the hierarchy
  int level = 0;
  double h = 0.0;  // cube edge length
  CutInfo cut;
  IndexSets sets;
  DofLayout layout;
  AssembledSystem assembled;
  TransformedSystem system;
  std::vector<SparseMatrix> prolongations;  // x0 multigrid transfers, levels 0..level
};

/// Vertices that carry x0 unknowns on a level: interior vertices for the
/// interface problem, vertices inside the ball for FD.
std::vector<int> active_x0_vertices(const Mesh& mesh, const LevelSet& phi, ProblemKind kind);

LevelProblem setup_level(const ExperimentConfig& cfg, const MeshHierarchy& hierarchy, int level, const Vec3& center,
                         const ManufacturedSolution& exact);

struct SolveRecord {
  PreconditionerKind kind{};
  int iterations = 0;
  bool converged = false;
  double seconds = 0.0;
  std::vector<double> residual_history;
};

struct StudyRow {
  int level = 0;
  double delta = 0.0;
  int N0 = 0;
  int N1 = 0;
  int cut_tets = 0;
  ErrorNorms errors;
  bool has_kappa = false;
  SpectrumEstimate kappa;        // kappa_2(Ahat)
  bool has_spectral = false;
  SpectrumEstimate kappa_block;  // kappa(D_A^{-1} Ahat)
  SpectrumEstimate kappa_a1;     // kappa(D1^{-1/2} A1 D1^{-1/2})
  std::vector<SolveRecord> solves;
  double setup_seconds = 0.0;
};

struct StudyResult {
  std::string name;
  ExperimentConfig config;
  std::vector<StudyRow> rows;
  bool all_converged() const;
};

/// Progress sink; receives one line per finished step.
using ProgressFn = std::function<void(const std::string&)>;

/// Refinement study over levels 0..max_level with the configured midpoint.
StudyResult run_interface_study(const ExperimentConfig& cfg, const ProgressFn& progress = {});
/// Interface problem at cfg.delta_level with midpoint (d, 2d, 3d) for each d in cfg.deltas.
StudyResult run_delta_sweep(const ExperimentConfig& cfg, const ProgressFn& progress = {});
/// Fictitious domain study over levels 0..max_level.
StudyResult run_fd_study(const ExperimentConfig& cfg, const ProgressFn& progress = {});

/// Solves one level problem with every configured preconditioner and fills the row.
StudyRow evaluate_level(const ExperimentConfig& cfg, const LevelProblem& lp, const ManufacturedSolution& exact,
                        const ProgressFn& progress = {});

/// log2(e_{l-1} / e_l); NaN for the first row.
std::vector<double> convergence_orders(const std::vector<double>& errors);

/// Deterministic tables (no timings), so reruns reproduce identical files.
std::string to_csv(const StudyResult& r);
std::string to_markdown(const StudyResult& r);
std::string to_timing_csv(const StudyResult& r);
/// Writes <dir>/<name>.csv, <dir>/<name>.md and <dir>/<name>_timings.csv.
void write_tables(const StudyResult& r, const std::string& dir);

}  // namespace cutfem
