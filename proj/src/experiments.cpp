#include "cutfem/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "cutfem/multigrid.hpp"
#include "cutfem/simplex.hpp"

namespace cutfem {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Degree-3 harmonic 3 y1^2 y2 - y2^3 and its gradient.
double h3(const Vec3& y) { return 3.0 * y[0] * y[0] * y[1] - y[1] * y[1] * y[1]; }
Vec3 grad_h3(const Vec3& y) { return {6.0 * y[0] * y[1], 3.0 * y[0] * y[0] - 3.0 * y[1] * y[1], 0.0}; }

SparseMatrix block_diagonal_part(const SparseMatrix& a, int n0) {
  std::vector<Triplet> e;
  e.reserve(a.nnz());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = a.offsets()[i]; k < a.offsets()[i + 1]; ++k) {
      const int j = a.columns()[k];
      if ((i < n0) == (j < n0)) e.push_back({i, j, a.values()[k]});
    }
  return SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(e));
}

std::string fmt(double v, int prec = 3, bool sci = false) {
  if (std::isnan(v)) return "-";
  std::ostringstream os;
  if (sci) os << std::scientific;
  else os << std::fixed;
  os << std::setprecision(prec) << v;
  return os.str();
}

void report(const ProgressFn& p, const std::string& s) {
  if (p) p(s);
}

}  // namespace

ManufacturedSolution ManufacturedSolution::interface(const Vec3& c, double alpha1, double alpha2) {
  ManufacturedSolution m;
  m.u = [=](const Vec3& x, int side) {
    const Vec3 y = x - c;
    return h3(y) * (std::exp(1.0 - dot(y, y)) - 1.0) / (side == 1 ? alpha1 : alpha2);
  };
  m.grad_u = [=](const Vec3& x, int side) {
    const Vec3 y = x - c;
    const double e = std::exp(1.0 - dot(y, y));
    const Vec3 g = (e - 1.0) * grad_h3(y) + (-2.0 * e * h3(y)) * y;
    return (1.0 / (side == 1 ? alpha1 : alpha2)) * g;
  };
  m.f = [=](const Vec3& x, int) {
    const Vec3 y = x - c;
    const double r2 = dot(y, y);
    return (18.0 - 4.0 * r2) * h3(y) * std::exp(1.0 - r2);
  };
  return m;
}

ManufacturedSolution ManufacturedSolution::fictitious(const Vec3& c) {
  ManufacturedSolution m;
  m.u = [=](const Vec3& x, int) {
    const Vec3 y = x - c;
    return h3(y) * std::exp(1.0 - dot(y, y));
  };
  m.grad_u = [=](const Vec3& x, int) {
    const Vec3 y = x - c;
    const double e = std::exp(1.0 - dot(y, y));
    return e * grad_h3(y) + (-2.0 * e * h3(y)) * y;
  };
  m.f = [=](const Vec3& x, int) {
    const Vec3 y = x - c;
    const double r2 = dot(y, y);
    return (18.0 - 4.0 * r2) * h3(y) * std::exp(1.0 - r2);
  };
  return m;
}

ErrorNorms error_norms(const Mesh& mesh, const CutInfo& cut, ProblemKind kind, const std::array<Vector, 2>& u_h,
                       const ManufacturedSolution& exact, int order) {
  const int nsides = kind == ProblemKind::Interface ? 2 : 1;
  double l2 = 0.0, semi = 0.0;
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const Tet& k = mesh.tets[t];
    const TetCoords x = tet_coords(mesh, t);
    const std::array<double, 4> phi{cut.signs.phi[k[0]], cut.signs.phi[k[1]], cut.signs.phi[k[2]],
                                     cut.signs.phi[k[3]]};
    const CutVolumeRules rules = cut_volume_rule(x, phi, order);
    const auto g = barycentric_gradients(x);
    for (int side = 1; side <= nsides; ++side) {
      const QuadRule& rule = side == 1 ? rules.neg : rules.pos;
      if (rule.empty()) continue;
      std::array<double, 4> c;
      for (int j = 0; j < 4; ++j) {
        c[j] = u_h[side - 1][k[j]];
        if (std::isnan(c[j])) throw std::logic_error("error_norms: missing discrete value on an active tet");
      }
      Vec3 gh{0.0, 0.0, 0.0};
      for (int j = 0; j < 4; ++j) gh = gh + c[j] * g[j];
      for (const auto& q : rule) {
        const auto l = barycentric(x, q.x);
        const double uh = c[0] * l[0] + c[1] * l[1] + c[2] * l[2] + c[3] * l[3];
        const double e = exact.u(q.x, side) - uh;
        const Vec3 ge = exact.grad_u(q.x, side) - gh;
        l2 += q.w * e * e;
        semi += q.w * dot(ge, ge);
      }
    }
  }
  return {std::sqrt(l2), std::sqrt(semi), std::sqrt(l2 + semi)};
}

std::vector<int> active_x0_vertices(const Mesh& mesh, const LevelSet& phi, ProblemKind kind) {
  std::vector<int> out;
  if (kind == ProblemKind::Interface) {
    for (int v = 0; v < mesh.num_vertices(); ++v)
      if (!mesh.boundary_vertex[v]) out.push_back(v);
    return out;
  }
  const VertexSigns s = snap_vertex_values(mesh, phi);
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (s.negative[v]) out.push_back(v);
  return out;
}

LevelProblem setup_level(const ExperimentConfig& cfg, const MeshHierarchy& hierarchy, int level, const Vec3& center,
                         const ManufacturedSolution& exact) {
  const Mesh& mesh = hierarchy.levels.at(level);
  const LevelSet phi = LevelSet::sphere(center, cfg.radius);
  LevelProblem lp;
  lp.mesh = &mesh;
  lp.level = level;
  lp.h = mesh.cube_edge();
  lp.cut = build_cut_info(mesh, phi, cfg.base_order);
  lp.sets = build_index_sets(mesh, lp.cut, cfg.problem);
  lp.layout = build_dof_layout(lp.sets, mesh.num_vertices());
  lp.assembled = cfg.problem == ProblemKind::Interface
                     ? assemble_interface(mesh, lp.cut, lp.layout, cfg.coeffs, exact.data())
                     : assemble_fd(mesh, lp.cut, lp.layout, cfg.coeffs, exact.data());
  lp.system = transform(lp.assembled.A, lp.assembled.b, build_L(lp.layout), lp.layout.N0());

  std::vector<std::vector<int>> active;
  for (int l = 0; l < level; ++l) active.push_back(active_x0_vertices(hierarchy.levels[l], phi, cfg.problem));
  active.push_back(lp.layout.x0_vertices);
  lp.prolongations = hierarchy_prolongations(hierarchy, active);
  return lp;
}

StudyRow evaluate_level(const ExperimentConfig& cfg, const LevelProblem& lp, const ManufacturedSolution& exact,
                        const ProgressFn& progress) {
  const TransformedSystem& sys = lp.system;
  const int n = sys.Ahat.rows();
  StudyRow row;
  row.level = lp.level;
  row.N0 = sys.N0;
  row.N1 = sys.N1;
  row.cut_tets = lp.cut.num_cut();

  const std::string tag = "level " + std::to_string(lp.level);

  // Discretization error from a direct solve.
  {
    const CholeskySolver direct(sys.Ahat);
    const Vector xhat = direct(sys.bhat);
    const Vector x = sys.L * xhat;
    const auto u_h = side_vertex_values(lp.layout, x, lp.assembled.fixed_values);
    row.errors = error_norms(*lp.mesh, lp.cut, cfg.problem, u_h, exact);
    report(progress, tag + ": errors L2 " + fmt(row.errors.l2, 3, true) + " H1 " + fmt(row.errors.h1, 3, true));
  }

  if (cfg.condition_number) {
    row.kappa = estimate_condition(sys.Ahat, cfg.dense_limit);
    row.has_kappa = true;
    report(progress, tag + ": kappa(Ahat) " + fmt(row.kappa.kappa, 4, true) + " [" + row.kappa.method + "]");
  }
  if (cfg.spectral_diagnostics) {
    const SparseMatrix da = block_diagonal_part(sys.Ahat, sys.N0);
    const auto pa = make_preconditioner(PreconditionerKind::BlockExact, sys, {}, cfg.precond);
    row.kappa_block = estimate_condition(sys.Ahat, da, *pa, cfg.dense_limit);
    row.kappa_a1 = estimate_condition(symmetric_diagonal_scaling(sys.A1, sys.D1), cfg.dense_limit);
    row.has_spectral = true;
    report(progress, tag + ": kappa(D_A^-1 Ahat) " + fmt(row.kappa_block.kappa, 4) + ", kappa(scaled A1) " +
                         fmt(row.kappa_a1.kappa, 4));
  }

  const MatrixOperator op(sys.Ahat);
  for (PreconditionerKind kind : cfg.preconditioners) {
    const auto t0 = Clock::now();
    const auto p = make_preconditioner(kind, sys, lp.prolongations, cfg.precond);
    Vector x(n, 0.0);
    const SolveReport rep = pcg(op, sys.bhat, *p, x, cfg.tol, cfg.max_iter);
    SolveRecord rec;
    rec.kind = kind;
    rec.iterations = rep.iterations;
    rec.converged = rep.converged;
    rec.seconds = seconds_since(t0);
    rec.residual_history = rep.residual_history;
    row.solves.push_back(std::move(rec));
    report(progress, tag + ": " + to_string(kind) + " " + std::to_string(rep.iterations) + " iterations" +
                         (rep.converged ? "" : " (not converged)"));
  }
  return row;
}

bool StudyResult::all_converged() const {
  for (const auto& r : rows)
    for (const auto& s : r.solves)
      if (!s.converged) return false;
  return true;
}

namespace {

StudyResult run_levels(const ExperimentConfig& cfg, const std::string& name, const ManufacturedSolution& exact,
                       const ProgressFn& progress) {
  cfg.validate();
  StudyResult res{name, cfg, {}};
  const MeshHierarchy hierarchy = build_hierarchy(cfg.n_per_axis, cfg.box, cfg.max_level);
  for (int l = 0; l <= cfg.max_level; ++l) {
    const auto t0 = Clock::now();
    const LevelProblem lp = setup_level(cfg, hierarchy, l, cfg.x0, exact);
    const double setup = seconds_since(t0);
    report(progress, "level " + std::to_string(l) + ": N0 " + std::to_string(lp.system.N0) + ", N1 " +
                         std::to_string(lp.system.N1) + ", setup " + fmt(setup, 2) + " s");
    StudyRow row = evaluate_level(cfg, lp, exact, progress);
    row.setup_seconds = setup;
    res.rows.push_back(std::move(row));
  }
  return res;
}

}  // namespace

StudyResult run_interface_study(const ExperimentConfig& cfg, const ProgressFn& progress) {
  if (cfg.problem != ProblemKind::Interface) throw std::invalid_argument("run_interface_study: problem must be interface");
  return run_levels(cfg, "interface_study",
                    ManufacturedSolution::interface(cfg.x0, cfg.coeffs.alpha1, cfg.coeffs.alpha2), progress);
}

StudyResult run_fd_study(const ExperimentConfig& cfg, const ProgressFn& progress) {
  if (cfg.problem != ProblemKind::Fictitious) throw std::invalid_argument("run_fd_study: problem must be fictitious");
  return run_levels(cfg, "fd_study", ManufacturedSolution::fictitious(cfg.x0), progress);
}

StudyResult run_delta_sweep(const ExperimentConfig& cfg, const ProgressFn& progress) {
  if (cfg.problem != ProblemKind::Interface) throw std::invalid_argument("run_delta_sweep: problem must be interface");
  cfg.validate();
  StudyResult res{"delta_sweep", cfg, {}};
  const MeshHierarchy hierarchy = build_hierarchy(cfg.n_per_axis, cfg.box, cfg.delta_level);
  for (double d : cfg.deltas) {
    const Vec3 center{d, 2.0 * d, 3.0 * d};
    const auto exact = ManufacturedSolution::interface(center, cfg.coeffs.alpha1, cfg.coeffs.alpha2);
    const auto t0 = Clock::now();
    const LevelProblem lp = setup_level(cfg, hierarchy, cfg.delta_level, center, exact);
    const double setup = seconds_since(t0);
    report(progress, "delta " + fmt(d, 3) + ": N0 " + std::to_string(lp.system.N0) + ", N1 " +
                         std::to_string(lp.system.N1));
    StudyRow row = evaluate_level(cfg, lp, exact, progress);
    row.delta = d;
    row.setup_seconds = setup;
    res.rows.push_back(std::move(row));
  }
  return res;
}

std::vector<double> convergence_orders(const std::vector<double>& e) {
  std::vector<double> out(e.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i < e.size(); ++i) out[i] = std::log2(e[i - 1] / e[i]);
  return out;
}

namespace {

struct Orders {
  std::vector<double> l2, h1, semi;
};

Orders orders_of(const StudyResult& r) {
  std::vector<double> l2, h1, semi;
  for (const auto& row : r.rows) {
    l2.push_back(row.errors.l2);
    h1.push_back(row.errors.h1);
    semi.push_back(row.errors.h1_semi);
  }
  return {convergence_orders(l2), convergence_orders(h1), convergence_orders(semi)};
}

bool is_sweep(const StudyResult& r) { return r.name == "delta_sweep"; }

}  // namespace

std::string to_csv(const StudyResult& r) {
  const Orders o = orders_of(r);
  const bool sweep = is_sweep(r);
  std::ostringstream os;
  os << std::setprecision(10);
  os << "level,delta,N0,N1,cut_tets,err_l2,order_l2,err_h1,order_h1,err_h1_semi,order_h1_semi,kappa,kappa_method,"
        "kappa_converged,kappa_block,kappa_a1";
  for (auto k : r.config.preconditioners) os << ',' << to_string(k) << "_iter";
  os << '\n';
  auto num = [](double v) {
    std::ostringstream s;
    s << std::setprecision(10) << v;
    return std::isnan(v) ? std::string() : s.str();
  };
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const StudyRow& row = r.rows[i];
    const double nan = std::numeric_limits<double>::quiet_NaN();
    os << row.level << ',' << row.delta << ',' << row.N0 << ',' << row.N1 << ',' << row.cut_tets << ','
       << num(row.errors.l2) << ',' << num(sweep ? nan : o.l2[i]) << ',' << num(row.errors.h1) << ','
       << num(sweep ? nan : o.h1[i]) << ',' << num(row.errors.h1_semi) << ',' << num(sweep ? nan : o.semi[i]) << ','
       << (row.has_kappa ? num(row.kappa.kappa) : "") << ',' << (row.has_kappa ? row.kappa.method : "") << ','
       << (row.has_kappa ? (row.kappa.converged ? "1" : "0") : "") << ','
       << (row.has_spectral ? num(row.kappa_block.kappa) : "") << ','
       << (row.has_spectral ? num(row.kappa_a1.kappa) : "");
    for (const auto& s : row.solves) os << ',' << s.iterations << (s.converged ? "" : "*");
    os << '\n';
  }
  return os.str();
}

std::string to_timing_csv(const StudyResult& r) {
  std::ostringstream os;
  os << std::setprecision(6) << "level,delta,setup_seconds";
  for (auto k : r.config.preconditioners) os << ',' << to_string(k) << "_seconds";
  os << '\n';
  for (const auto& row : r.rows) {
    os << row.level << ',' << row.delta << ',' << row.setup_seconds;
    for (const auto& s : row.solves) os << ',' << s.seconds;
    os << '\n';
  }
  return os.str();
}

std::string to_markdown(const StudyResult& r) {
  const Orders o = orders_of(r);
  const bool sweep = is_sweep(r);
  std::ostringstream os;
  const std::string key = sweep ? "delta" : "level";
  auto keyval = [&](const StudyRow& row) { return sweep ? fmt(row.delta, 2) : std::to_string(row.level); };

  os << "# " << r.name << "\n\n";
  os << "## Dimensions\n\n| " << key << " | N0 | N1 | cut tets |\n|---|---|---|---|\n";
  for (const auto& row : r.rows)
    os << "| " << keyval(row) << " | " << row.N0 << " | " << row.N1 << " | " << row.cut_tets << " |\n";

  os << "\n## Discretization errors\n\n| " << key
     << " | L2 | order | H1 | order | H1 semi | order |\n|---|---|---|---|---|---|---|\n";
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    os << "| " << keyval(row) << " | " << fmt(row.errors.l2, 3, true) << " | " << (sweep ? "-" : fmt(o.l2[i], 2))
       << " | " << fmt(row.errors.h1, 3, true) << " | " << (sweep ? "-" : fmt(o.h1[i], 2)) << " | "
       << fmt(row.errors.h1_semi, 3, true) << " | " << (sweep ? "-" : fmt(o.semi[i], 2)) << " |\n";
  }

  os << "\n## Condition numbers and PCG iterations\n\n| " << key << " | kappa(Ahat) | kappa(D_A^-1 Ahat) | kappa(D1 A1)";
  for (auto k : r.config.preconditioners) os << " | " << to_string(k);
  os << " |\n|---|---|---|---";
  for (std::size_t k = 0; k < r.config.preconditioners.size(); ++k) os << "|---";
  os << "|\n";
  for (const auto& row : r.rows) {
    os << "| " << keyval(row) << " | "
       << (row.has_kappa ? fmt(row.kappa.kappa, 3, true) + (row.kappa.converged ? "" : " (lower bound)") : "-")
       << " | " << (row.has_spectral ? fmt(row.kappa_block.kappa, 3) : "-") << " | "
       << (row.has_spectral ? fmt(row.kappa_a1.kappa, 3) : "-");
    for (const auto& s : row.solves) os << " | " << s.iterations << (s.converged ? "" : " (no conv.)");
    os << " |\n";
  }
  return os.str();
}

void write_tables(const StudyResult& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base = std::filesystem::path(dir) / r.name;
  std::ofstream csv(base.string() + ".csv"), md(base.string() + ".md"), tm(base.string() + "_timings.csv");
  if (!csv || !md || !tm) throw std::runtime_error("cannot write tables to " + dir);
  csv << to_csv(r);
  md << to_markdown(r);
  tm << to_timing_csv(r);
}

}  // namespace cutfem
