#include <cmath>
#include <numbers>
#include <random>

#include "cutfem/config.hpp"
#include "cutfem/experiments.hpp"
#include "cutfem/simplex.hpp"
#include "doctest.h"

using namespace cutfem;

namespace {

const Vec3 kCenter{0.001, 0.002, 0.003};

Vec3 random_unit(std::mt19937& rng) {
  std::normal_distribution<double> N;
  Vec3 v{N(rng), N(rng), N(rng)};
  return (1.0 / norm(v)) * v;
}

// Second-order central difference Laplacian.
double fd_laplacian(const std::function<double(const Vec3&, int)>& u, const Vec3& x, double h) {
  double s = -6.0 * u(x, 1);
  for (int k = 0; k < 3; ++k) {
    Vec3 p = x, m = x;
    p[k] += h;
    m[k] -= h;
    s += u(p, 1) + u(m, 1);
  }
  return s / (h * h);
}

}  // namespace

TEST_CASE("interface manufactured solution satisfies both interface conditions") {
  const double a1 = 1.0, a2 = 10.0;
  const auto m = ManufacturedSolution::interface(kCenter, a1, a2);
  std::mt19937 rng(2024);
  double jump = 0.0, flux = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const Vec3 n = random_unit(rng);
    const Vec3 x = kCenter + n;
    jump = std::max(jump, std::abs(m.u(x, 1) - m.u(x, 2)));
    flux = std::max(flux, std::abs(a1 * dot(m.grad_u(x, 1), n) - a2 * dot(m.grad_u(x, 2), n)));
  }
  CHECK(jump <= 1e-12);
  CHECK(flux <= 1e-12);
}

TEST_CASE("manufactured sources match the Laplacian of the exact solutions") {
  const auto fd = ManufacturedSolution::fictitious(kCenter);
  const auto itf = ManufacturedSolution::interface(kCenter, 1.0, 10.0);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(-1.2, 1.2);
  for (int k = 0; k < 200; ++k) {
    const Vec3 x{U(rng), U(rng), U(rng)};
    const Vec3 y = x - kCenter;
    const double r2 = dot(y, y);
    const double h3 = 3.0 * y[0] * y[0] * y[1] - y[1] * y[1] * y[1];
    // -Laplace(h3 e^{1-r^2}) = h3 e^{1-r^2} (18 - 4 r^2) for the degree-3 harmonic h3.
    const double lap = h3 * std::exp(1.0 - r2) * (4.0 * r2 - 18.0);
    CHECK(std::abs(fd.f(x, 1) + lap) <= 1e-10 * (1.0 + std::abs(lap)));
    CHECK(fd.f(x, 1) == doctest::Approx(fd.u(x, 1) * (18.0 - 4.0 * r2)).epsilon(1e-12));
    // Same source for the interface problem: alpha_i^{-1} scaling cancels and the constant shift is harmonic.
    CHECK(itf.f(x, 1) == doctest::Approx(fd.f(x, 1)).epsilon(1e-14));
    // Independent finite-difference check of the analytic derivation.
    CHECK(-fd_laplacian(fd.u, x, 1e-3) == doctest::Approx(fd.f(x, 1)).epsilon(1e-4).scale(1.0));
    CHECK(-fd_laplacian(itf.u, x, 1e-3) == doctest::Approx(itf.f(x, 1)).epsilon(1e-4).scale(1.0));
  }
}

TEST_CASE("manufactured gradients agree with finite differences") {
  const auto m = ManufacturedSolution::interface(kCenter, 1.0, 10.0);
  const Vec3 x{0.3, -0.4, 0.7};
  for (int side = 1; side <= 2; ++side) {
    const Vec3 g = m.grad_u(x, side);
    for (int k = 0; k < 3; ++k) {
      Vec3 p = x, q = x;
      p[k] += 1e-6;
      q[k] -= 1e-6;
      CHECK(g[k] == doctest::Approx((m.u(p, side) - m.u(q, side)) / 2e-6).epsilon(1e-7));
    }
  }
}

TEST_CASE("error norms vanish for the interpolant of an affine function") {
  const MeshHierarchy h = build_hierarchy(4, {{-1.5, -1.5, -1.5}, {1.5, 1.5, 1.5}}, 1);
  const Mesh& mesh = h.levels[1];
  const CutInfo cut = build_cut_info(mesh, LevelSet::sphere(kCenter, 1.0));
  ManufacturedSolution lin;
  lin.u = [](const Vec3& p, int) { return 2.0 - p[0] + 0.5 * p[1] + 3.0 * p[2]; };
  lin.grad_u = [](const Vec3&, int) { return Vec3{-1.0, 0.5, 3.0}; };
  lin.f = [](const Vec3&, int) { return 0.0; };
  std::array<Vector, 2> uh{Vector(mesh.num_vertices()), Vector(mesh.num_vertices())};
  for (int v = 0; v < mesh.num_vertices(); ++v) uh[0][v] = uh[1][v] = lin.u(mesh.vertices[v], 1);
  const ErrorNorms e = error_norms(mesh, cut, ProblemKind::Interface, uh, lin);
  CHECK(e.l2 <= 1e-10);
  CHECK(e.h1 <= 1e-10);
}

TEST_CASE("convergence orders") {
  const auto o = convergence_orders({1.0, 0.25, 0.0625});
  CHECK(std::isnan(o[0]));
  CHECK(o[1] == doctest::Approx(2.0));
  CHECK(o[2] == doctest::Approx(2.0));
}

TEST_CASE("config parsing") {
  const ExperimentConfig base = ExperimentConfig::defaults(ProblemKind::Interface);
  const auto c = parse_config(R"({"max_level": 2, "gamma": 20, "preconditioners": ["pa", "PB"], "x0": [0, 0, 0.5]})",
                              base);
  CHECK(c.max_level == 2);
  CHECK(c.coeffs.gamma == 20.0);
  REQUIRE(c.preconditioners.size() == 2);
  CHECK(c.preconditioners[1] == PreconditionerKind::BlockMGSGS);
  CHECK(c.x0[2] == 0.5);
  CHECK_THROWS_AS(parse_config(R"({"gamma_typo": 1})", base), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"max_level": -1})", base), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"beta": -0.5})", base), std::invalid_argument);

  const auto fd = parse_config(R"({"problem": "fictitious"})", base);
  CHECK(fd.problem == ProblemKind::Fictitious);
  CHECK(fd.precond.a1_sgs_iterations == 3);

  const auto round = parse_config(config_to_json(c), base);
  CHECK(config_to_json(round) == config_to_json(c));
}

TEST_CASE("small studies are deterministic and emit consistent tables") {
  ExperimentConfig cfg = ExperimentConfig::defaults(ProblemKind::Interface);
  cfg.max_level = 1;
  const StudyResult a = run_interface_study(cfg);
  const StudyResult b = run_interface_study(cfg);
  CHECK(to_csv(a) == to_csv(b));
  CHECK(a.all_converged());
  REQUIRE(a.rows.size() == 2);
  CHECK(a.rows[0].N0 == 27);
  CHECK(a.rows[1].N1 == 208);
  CHECK(a.rows[1].errors.l2 < a.rows[0].errors.l2);
  const std::string md = to_markdown(a);
  CHECK(md.find("P_SGS") != std::string::npos);
  CHECK(md.find("| 1 | 343 | 208 |") != std::string::npos);

  cfg.deltas = {0.0, 0.05};
  cfg.delta_level = 1;
  cfg.spectral_diagnostics = false;
  const StudyResult s1 = run_delta_sweep(cfg);
  const StudyResult s2 = run_delta_sweep(cfg);
  CHECK(to_csv(s1) == to_csv(s2));
  CHECK(s1.rows[1].delta == 0.05);

  ExperimentConfig fd = ExperimentConfig::defaults(ProblemKind::Fictitious);
  fd.max_level = 0;
  const StudyResult f = run_fd_study(fd);
  CHECK(f.rows[0].N0 == 7);
  CHECK(f.rows[0].N1 == 44);
  CHECK_THROWS_AS(run_fd_study(cfg), std::invalid_argument);
}

TEST_CASE("ghost penalty lowers the condition number at level 2") {
  const MeshHierarchy h = build_hierarchy(4, {{-1.5, -1.5, -1.5}, {1.5, 1.5, 1.5}}, 2);
  ExperimentConfig cfg = ExperimentConfig::defaults(ProblemKind::Interface);
  const auto exact = ManufacturedSolution::interface(cfg.x0, cfg.coeffs.alpha1, cfg.coeffs.alpha2);
  const SpectrumEstimate stab = estimate_condition(setup_level(cfg, h, 2, cfg.x0, exact).system.Ahat);
  REQUIRE(stab.converged);
  cfg.coeffs.beta = 0.0;
  cfg.coeffs.gamma = 100.0;
  const LevelProblem bare = setup_level(cfg, h, 2, cfg.x0, exact);
  // Ritz values lie inside the spectrum, so a short run already bounds kappa from below.
  LanczosSettings ls;
  ls.max_iter = 300;
  const MatrixOperator op(bare.system.Ahat);
  const SpectrumEstimate lower = lanczos_spectrum(op, nullptr, nullptr, ls);
  CHECK(lower.kappa >= stab.kappa);
}
