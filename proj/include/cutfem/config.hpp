#pragma once

#include <string>
#include <vector>

#include "cutfem/assembly.hpp"
#include "cutfem/mesh.hpp"
#include "cutfem/preconditioners.hpp"
#include "cutfem/space.hpp"

namespace cutfem {

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::Interface;
  int max_level = 3;
  int n_per_axis = 4;
  Box box{{-1.5, -1.5, -1.5}, {1.5, 1.5, 1.5}};
  Vec3 x0{0.001, 0.002, 0.003};  // ball midpoint
  double radius = 1.0;
  std::vector<double> deltas{0.0, 0.01, 0.02, 0.03, 0.04, 0.05};
  int delta_level = 2;

  ProblemCoefficients coeffs;
  double tol = 1e-6;
  int max_iter = 5000;
  std::vector<PreconditionerKind> preconditioners{PreconditionerKind::SGS, PreconditionerKind::BlockExact,
                                                  PreconditionerKind::BlockDiagSGS, PreconditionerKind::BlockMGSGS};
  PreconditionerSettings precond;
  int base_order = 4;

  bool condition_number = true;      // kappa_2(Ahat)
  bool spectral_diagnostics = true;  // kappa(D_A^{-1} Ahat), kappa(D1^{-1/2} A1 D1^{-1/2})
  int dense_limit = 3000;
  std::string output_dir = "results";

  /// Defaults for the given problem (FD: alpha = 1, three SGS iterations on A1).
  static ExperimentConfig defaults(ProblemKind kind);
  void validate() const;
};

/// Reads a JSON object whose keys mirror the field names above; missing keys
/// keep the defaults of `base`.  Unknown keys are rejected.
ExperimentConfig load_config(const std::string& path, ExperimentConfig base);
ExperimentConfig parse_config(const std::string& json_text, ExperimentConfig base);
std::string config_to_json(const ExperimentConfig& c);

std::string to_string(ProblemKind k);
ProblemKind parse_problem(const std::string& s);

}  // namespace cutfem
