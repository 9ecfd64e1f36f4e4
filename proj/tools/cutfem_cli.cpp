#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cutfem/config.hpp"
#include "cutfem/experiments.hpp"
#include "cutfem/solver.hpp"

using namespace cutfem;

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<int> max_level;
  std::string output_dir;
  std::vector<std::string> preconditioners;
  bool quiet = false;
  bool no_spectral = false;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("-c,--config", o.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app->add_option("-l,--max-level", o.max_level, "finest refinement level");
  app->add_option("-o,--output", o.output_dir, "directory for CSV and Markdown tables");
  app->add_option("-p,--preconditioners", o.preconditioners, "subset of sgs, pa, pd, pb");
  app->add_flag("-q,--quiet", o.quiet, "suppress progress output");
  app->add_flag("--no-spectral", o.no_spectral, "skip kappa(D_A^-1 Ahat) and kappa(D1 A1) diagnostics");
}

ExperimentConfig make_config(ProblemKind kind, const CommonOptions& o) {
  ExperimentConfig c = ExperimentConfig::defaults(kind);
  if (!o.config_path.empty()) c = load_config(o.config_path, c);
  if (c.problem != kind) throw std::invalid_argument("config problem does not match the subcommand");
  if (o.max_level) c.max_level = *o.max_level;
  if (!o.output_dir.empty()) c.output_dir = o.output_dir;
  if (!o.preconditioners.empty()) {
    c.preconditioners.clear();
    for (const auto& p : o.preconditioners) c.preconditioners.push_back(parse_preconditioner(p));
  }
  if (o.no_spectral) c.spectral_diagnostics = false;
  c.validate();
  return c;
}

ProgressFn progress_fn(bool quiet) {
  if (quiet) return {};
  return [](const std::string& s) { std::cerr << s << std::endl; };
}

int finish(const StudyResult& r) {
  write_tables(r, r.config.output_dir);
  std::cout << to_markdown(r);
  if (!r.all_converged()) {
    std::cerr << "error: at least one PCG solve did not converge\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nitsche CutFEM for Poisson interface and fictitious domain problems"};
  app.require_subcommand(0, 1);

  CommonOptions study_opts, sweep_opts, fd_opts;
  auto* study = app.add_subcommand("interface-study", "interface problem over refinement levels");
  add_common(study, study_opts);

  auto* sweep = app.add_subcommand("delta-sweep", "interface problem with shifted ball midpoint");
  add_common(sweep, sweep_opts);
  int sweep_level = -1;
  sweep->add_option("--level", sweep_level, "refinement level of the sweep");

  auto* fd = app.add_subcommand("fd-study", "fictitious domain problem over refinement levels");
  add_common(fd, fd_opts);

  CommonOptions cond_opts;
  std::string cond_problem = "interface";
  int cond_level = 0;
  auto* cond = app.add_subcommand("cond", "condition numbers of one level");
  cond->add_option("-c,--config", cond_opts.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  cond->add_option("--problem", cond_problem, "interface or fictitious");
  cond->add_option("--level", cond_level, "refinement level");

  CommonOptions exp_opts;
  std::string exp_problem = "interface";
  int exp_level = 0;
  std::string exp_dir = "matrices";
  auto* exportm = app.add_subcommand("export-matrices", "write A, L, Ahat, A0, A1 in Matrix Market format");
  exportm->add_option("-c,--config", exp_opts.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  exportm->add_option("--problem", exp_problem, "interface or fictitious");
  exportm->add_option("--level", exp_level, "refinement level");
  exportm->add_option("-o,--output", exp_dir, "output directory");

  int mesh_level = 0;
  std::string mesh_file = "mesh.txt";
  auto* meshcmd = app.add_subcommand("mesh", "write the level mesh in a plain text format");
  meshcmd->add_option("--level", mesh_level, "refinement level");
  meshcmd->add_option("-o,--output", mesh_file, "output file");

  bool dump_config = false;
  app.add_flag("--print-default-config", dump_config, "print the default interface configuration and exit");

  CLI11_PARSE(app, argc, argv);
  if (dump_config) {
    std::cout << config_to_json(ExperimentConfig::defaults(ProblemKind::Interface)) << "\n";
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cout << app.help();
    return 1;
  }

  try {
    if (*study) {
      const auto cfg = make_config(ProblemKind::Interface, study_opts);
      return finish(run_interface_study(cfg, progress_fn(study_opts.quiet)));
    }
    if (*sweep) {
      auto cfg = make_config(ProblemKind::Interface, sweep_opts);
      if (sweep_level >= 0) cfg.delta_level = sweep_level;
      return finish(run_delta_sweep(cfg, progress_fn(sweep_opts.quiet)));
    }
    if (*fd) {
      const auto cfg = make_config(ProblemKind::Fictitious, fd_opts);
      return finish(run_fd_study(cfg, progress_fn(fd_opts.quiet)));
    }
    if (*cond || *exportm) {
      const bool is_cond = cond->parsed();
      const ProblemKind kind = parse_problem(is_cond ? cond_problem : exp_problem);
      auto cfg = make_config(kind, is_cond ? cond_opts : exp_opts);
      const int level = is_cond ? cond_level : exp_level;
      cfg.max_level = level;
      const auto exact = kind == ProblemKind::Interface
                             ? ManufacturedSolution::interface(cfg.x0, cfg.coeffs.alpha1, cfg.coeffs.alpha2)
                             : ManufacturedSolution::fictitious(cfg.x0);
      const MeshHierarchy h = build_hierarchy(cfg.n_per_axis, cfg.box, level);
      const LevelProblem lp = setup_level(cfg, h, level, cfg.x0, exact);
      const TransformedSystem& s = lp.system;
      if (is_cond) {
        const auto k = estimate_condition(s.Ahat, cfg.dense_limit);
        std::cout << "N0 " << s.N0 << " N1 " << s.N1 << "\n";
        std::cout << "kappa(Ahat) " << k.kappa << " lambda_min " << k.lambda_min << " lambda_max " << k.lambda_max
                  << " method " << k.method << (k.converged ? "" : " (lower bound)") << "\n";
        const auto a1 = estimate_condition(symmetric_diagonal_scaling(s.A1, s.D1), cfg.dense_limit);
        std::cout << "kappa(D1^-1/2 A1 D1^-1/2) " << a1.kappa << "\n";
        return 0;
      }
      std::filesystem::create_directories(exp_dir);
      const std::filesystem::path d(exp_dir);
      const std::pair<const char*, const SparseMatrix*> mats[] = {
          {"A.mtx", &s.A}, {"L.mtx", &s.L}, {"Ahat.mtx", &s.Ahat}, {"A0.mtx", &s.A0}, {"A1.mtx", &s.A1}};
      for (const auto& [name, m] : mats) {
        std::ofstream out(d / name);
        if (!out) throw std::runtime_error(std::string("cannot write ") + name);
        m->write_matrix_market(out);
      }
      std::cout << "wrote matrices of level " << level << " to " << exp_dir << "\n";
      return 0;
    }
    if (*meshcmd) {
      const MeshHierarchy h = build_hierarchy(4, Box{{-1.5, -1.5, -1.5}, {1.5, 1.5, 1.5}}, mesh_level);
      std::ofstream out(mesh_file);
      if (!out) throw std::runtime_error("cannot open " + mesh_file);
      write_mesh_ascii(h.levels[h.finest()], out);
      return 0;
    }
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
