#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "cutfem/experiments.hpp"
#include "cutfem/multigrid.hpp"
#include "cutfem/preconditioners.hpp"
#include "cutfem/solver.hpp"
#include "cutfem/spectrum.hpp"
#include "doctest.h"

using namespace cutfem;

namespace {

const Box kBox{{-1.5, -1.5, -1.5}, {1.5, 1.5, 1.5}};

Vector random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Vector v(n);
  for (auto& x : v) x = U(rng);
  return v;
}

SparseMatrix from_dense(const Eigen::MatrixXd& d) {
  std::vector<Triplet> e;
  for (int i = 0; i < d.rows(); ++i)
    for (int j = 0; j < d.cols(); ++j)
      if (d(i, j) != 0.0) e.push_back({i, j, d(i, j)});
  return SparseMatrix::from_triplets(static_cast<int>(d.rows()), static_cast<int>(d.cols()), std::move(e));
}

Eigen::MatrixXd random_spd(int n, unsigned seed, double shift) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Eigen::MatrixXd b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = U(rng);
  return b * b.transpose() + shift * Eigen::MatrixXd::Identity(n, n);
}

SparseMatrix tridiagonal(int n) {
  std::vector<Triplet> e;
  for (int i = 0; i < n; ++i) {
    e.push_back({i, i, 2.0});
    if (i > 0) e.push_back({i, i - 1, -1.0});
    if (i + 1 < n) e.push_back({i, i + 1, -1.0});
  }
  return SparseMatrix::from_triplets(n, n, std::move(e));
}

std::vector<int> interior_vertices(const Mesh& m) {
  std::vector<int> v;
  for (int i = 0; i < m.num_vertices(); ++i)
    if (!m.boundary_vertex[i]) v.push_back(i);
  return v;
}

void check_symmetric(const LinearOperator& p, unsigned seed) {
  for (unsigned k = 0; k < 3; ++k) {
    const Vector u = random_vector(p.size(), seed + 2 * k), v = random_vector(p.size(), seed + 2 * k + 1);
    const double a = dot(p(u), v), b = dot(u, p(v));
    CHECK(std::abs(a - b) <= 1e-8 * std::max(std::abs(a), 1e-300));
  }
}

}  // namespace

TEST_CASE("sparse matrix basics") {
  const SparseMatrix a = SparseMatrix::from_triplets(2, 3, {{0, 2, 1.0}, {1, 0, 2.0}, {0, 2, 0.5}, {0, 0, 3.0}});
  CHECK(a.nnz() == 3);
  CHECK(a.at(0, 2) == 1.5);
  CHECK(a.at(1, 1) == 0.0);
  const SparseMatrix t = a.transpose();
  CHECK(t.rows() == 3);
  CHECK(t.at(2, 0) == 1.5);
  const SparseMatrix p = multiply(a, t);
  CHECK(p.at(0, 0) == doctest::Approx(9.0 + 2.25));
  CHECK(p.at(1, 0) == doctest::Approx(6.0));
  CHECK(p.is_symmetric());
}

TEST_CASE("pcg with identity operator and preconditioner converges in one step") {
  const int n = 17;
  const SparseMatrix id = SparseMatrix::identity(n);
  const MatrixOperator a(id);
  const IdentityOperator p(n);
  const Vector b = random_vector(n, 1);
  Vector x(n, 0.0);
  const SolveReport r = pcg(a, b, p, x);
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(b[i]));
}

TEST_CASE("pcg on a random SPD system matches a dense solve") {
  const Eigen::MatrixXd d = random_spd(50, 3, 1.0);
  const SparseMatrix a = from_dense(d);
  const Vector b = random_vector(50, 4);
  const Eigen::VectorXd ref = d.ldlt().solve(Eigen::Map<const Eigen::VectorXd>(b.data(), 50));
  const MatrixOperator op(a);
  const SgsPreconditioner p(a);
  Vector x(50, 0.0);
  const SolveReport r = pcg(op, b, p, x, 1e-12);
  CHECK(r.converged);
  Eigen::VectorXd diff = Eigen::Map<Eigen::VectorXd>(x.data(), 50) - ref;
  CHECK(diff.norm() <= 1e-5 * ref.norm());
  CHECK(r.residual_history.front() == 1.0);
  CHECK(r.residual_history.back() <= 1e-12);
}

TEST_CASE("pcg reports non-SPD operators") {
  const SparseMatrix a = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {1, 1, -1.0}});
  const MatrixOperator op(a);
  const IdentityOperator p(2);
  Vector x(2, 0.0);
  const Vector b{0.0, 1.0};
  CHECK_THROWS_AS(pcg(op, b, p, x), SolverError);
}

TEST_CASE("symmetric Gauss-Seidel") {
  SUBCASE("exact on diagonal matrices") {
    const SparseMatrix d = SparseMatrix::from_triplets(3, 3, {{0, 0, 2.0}, {1, 1, 4.0}, {2, 2, 0.5}});
    const SgsPreconditioner p(d);
    const Vector z = p(Vector{1.0, 1.0, 1.0});
    CHECK(z[0] == doctest::Approx(0.5));
    CHECK(z[1] == doctest::Approx(0.25));
    CHECK(z[2] == doctest::Approx(2.0));
  }
  SUBCASE("stationary iteration contracts on a tridiagonal SPD matrix") {
    const int n = 10;
    const SparseMatrix a = tridiagonal(n);
    const SgsPreconditioner p(a);
    // Iteration matrix I - P^{-1} A, assembled column by column.
    Eigen::MatrixXd it(n, n);
    for (int j = 0; j < n; ++j) {
      Vector e(n, 0.0);
      e[j] = 1.0;
      const Vector z = p(a * e);
      for (int i = 0; i < n; ++i) it(i, j) = e[i] - z[i];
    }
    CHECK(it.eigenvalues().cwiseAbs().maxCoeff() < 1.0);
  }
  SUBCASE("symmetric operator") {
    const SparseMatrix a = from_dense(random_spd(30, 5, 30.0));
    check_symmetric(SgsPreconditioner(a), 10);
    check_symmetric(SgsPreconditioner(a, 3), 20);
  }
  SUBCASE("zero diagonal is rejected") {
    const SparseMatrix a = SparseMatrix::from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}});
    CHECK_THROWS_AS(SgsPreconditioner{a}, SolverError);
  }
}

TEST_CASE("Cholesky solver rejects indefinite matrices") {
  const SparseMatrix a = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {1, 1, -1.0}});
  CHECK_THROWS_AS(CholeskySolver{a}, SolverError);
}

TEST_CASE("geometric multigrid on the P1 Laplacian") {
  const MeshHierarchy h = build_hierarchy(4, kBox, 2);
  std::vector<std::vector<int>> active;
  for (const Mesh& m : h.levels) active.push_back(interior_vertices(m));
  const auto prolongations = hierarchy_prolongations(h, active);

  SUBCASE("Galerkin coarse operators equal the re-assembled ones") {
    for (int l = 0; l < 2; ++l) {
      const SparseMatrix fine = assemble_p1_laplacian(h.levels[l + 1], active[l + 1]);
      const SparseMatrix coarse = assemble_p1_laplacian(h.levels[l], active[l]);
      const SparseMatrix g = galerkin_product(fine, prolongations[l]);
      REQUIRE(g.rows() == coarse.rows());
      double diff = 0.0;
      for (int i = 0; i < g.rows(); ++i)
        for (int k = g.offsets()[i]; k < g.offsets()[i + 1]; ++k)
          diff = std::max(diff, std::abs(g.values()[k] - coarse.at(i, g.columns()[k])));
      for (int i = 0; i < coarse.rows(); ++i)
        for (int k = coarse.offsets()[i]; k < coarse.offsets()[i + 1]; ++k)
          diff = std::max(diff, std::abs(coarse.values()[k] - g.at(i, coarse.columns()[k])));
      CHECK(diff <= 1e-10);
    }
  }

  SUBCASE("prolongation of constants without boundary restriction") {
    std::vector<std::vector<int>> all;
    for (const Mesh& m : h.levels) {
      std::vector<int> v(m.num_vertices());
      for (int i = 0; i < m.num_vertices(); ++i) v[i] = i;
      all.push_back(v);
    }
    const auto p = hierarchy_prolongations(h, all);
    for (const auto& pl : p) {
      const Vector one(pl.cols(), 1.0);
      for (double v : pl * one) CHECK(v == 1.0);
    }
  }

  SUBCASE("one V-cycle reduces the error by at least a factor 5") {
    const SparseMatrix a = assemble_p1_laplacian(h.levels[2], active[2]);
    const Multigrid mg(a, prolongations, MultigridSettings{1, 1, 1});
    CHECK(mg.num_levels() == 3);
    const Vector b = random_vector(a.rows(), 11);
    const Vector exact = CholeskySolver(a)(b);
    Vector x(a.rows(), 0.0);
    // Error reduction of a V-cycle started from a random guess.
    const Vector x0 = random_vector(a.rows(), 12);
    x = x0;
    mg.vcycle(2, b, x);
    Vector e0(a.rows()), e1(a.rows());
    for (int i = 0; i < a.rows(); ++i) {
      e0[i] = x0[i] - exact[i];
      e1[i] = x[i] - exact[i];
    }
    const double ratio = std::sqrt(dot(e1, a * e1) / dot(e0, a * e0));
    CHECK(ratio <= 0.2);
  }

  SUBCASE("three-cycle preconditioner is symmetric") {
    const SparseMatrix a = assemble_p1_laplacian(h.levels[2], active[2]);
    const Multigrid mg(a, prolongations);
    check_symmetric(mg, 30);
  }
}

TEST_CASE("condition number estimates") {
  SUBCASE("identity") {
    const auto e = estimate_condition(SparseMatrix::identity(40));
    CHECK(e.kappa == doctest::Approx(1.0));
  }
  SUBCASE("Lanczos matches the dense solver on a 20x20 SPD matrix") {
    const SparseMatrix a = from_dense(random_spd(20, 8, 0.5));
    const auto d = dense_spectrum(a);
    const auto l = lanczos_spectrum(MatrixOperator(a), nullptr, nullptr);
    CHECK(l.converged);
    CHECK(l.kappa == doctest::Approx(d.kappa).epsilon(0.01));
  }
  SUBCASE("generalized Lanczos matches the dense generalized solver") {
    const SparseMatrix k = from_dense(random_spd(40, 9, 0.5));
    const SparseMatrix m = from_dense(random_spd(40, 10, 5.0));
    const CholeskySolver minv(m);
    const auto d = dense_generalized_spectrum(k, m);
    const MatrixOperator mop(m);
    const auto l = lanczos_spectrum(MatrixOperator(k), &mop, &minv);
    CHECK(l.kappa == doctest::Approx(d.kappa).epsilon(0.01));
    const auto viaest = estimate_condition(k, m, minv, 10);
    CHECK(viaest.method == "lanczos");
    CHECK(viaest.kappa == doctest::Approx(d.kappa).epsilon(0.01));
  }
  SUBCASE("diagonal scaling") {
    const SparseMatrix a = SparseMatrix::from_triplets(2, 2, {{0, 0, 4.0}, {0, 1, 2.0}, {1, 0, 2.0}, {1, 1, 9.0}});
    const SparseMatrix s = symmetric_diagonal_scaling(a, a.diagonal());
    CHECK(s.at(0, 0) == doctest::Approx(1.0));
    CHECK(s.at(0, 1) == doctest::Approx(2.0 / 6.0));
  }
}

TEST_CASE("preconditioners on the level 1 interface system") {
  ExperimentConfig cfg = ExperimentConfig::defaults(ProblemKind::Interface);
  const MeshHierarchy h = build_hierarchy(4, kBox, 1);
  const auto exact = ManufacturedSolution::interface(cfg.x0, cfg.coeffs.alpha1, cfg.coeffs.alpha2);
  const LevelProblem lp = setup_level(cfg, h, 1, cfg.x0, exact);
  const MatrixOperator op(lp.system.Ahat);
  for (auto kind : {PreconditionerKind::SGS, PreconditionerKind::BlockExact, PreconditionerKind::BlockDiagSGS,
                    PreconditionerKind::BlockMGSGS}) {
    INFO(to_string(kind));
    const auto p = make_preconditioner(kind, lp.system, lp.prolongations, cfg.precond);
    CHECK(p->size() == lp.system.Ahat.rows());
    check_symmetric(*p, 40);
    Vector x(p->size(), 0.0);
    const SolveReport r = pcg(op, lp.system.bhat, *p, x, 1e-6);
    CHECK(r.converged);
    // Stopping-rule fidelity: a tiny tolerance change moves the count by at most one.
    Vector y(p->size(), 0.0);
    const SolveReport r2 = pcg(op, lp.system.bhat, *p, y, 1e-6 + 1e-8);
    CHECK(std::abs(r.iterations - r2.iterations) <= 1);
  }
  CHECK(parse_preconditioner("PB") == PreconditionerKind::BlockMGSGS);
  CHECK_THROWS(parse_preconditioner("ilu"));
}

TEST_CASE("P_D coincides with P_A when the interface block is diagonal") {
  TransformedSystem s;
  s.N0 = 3;
  s.N1 = 2;
  s.A0 = tridiagonal(3);
  s.A1 = SparseMatrix::from_triplets(2, 2, {{0, 0, 2.0}, {1, 1, 5.0}});
  const auto pa = make_preconditioner(PreconditionerKind::BlockExact, s, {});
  const auto pd = make_preconditioner(PreconditionerKind::BlockDiagSGS, s, {});
  const Vector r = random_vector(5, 50);
  const Vector za = (*pa)(r), zd = (*pd)(r);
  for (int i = 0; i < 5; ++i) CHECK(za[i] == doctest::Approx(zd[i]).epsilon(1e-14));
}
