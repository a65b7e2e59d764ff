#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "bingham/operators.hpp"
#include "bingham/scenario.hpp"
#include "bingham/solver.hpp"

using namespace bingham;

namespace {

SolveConfig fixed_dt(double dt, double m = 8.0) {
  SolveConfig c;
  c.dt = dt;
  c.m = RegIndex(m);
  c.t_end = 1.0;
  return c;
}

}  // namespace

TEST_CASE("solve config validation") {
  SolveConfig c;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);  // neither dt nor cfl
  c.dt = 0.1;
  CHECK_NOTHROW(c.validate());
  c.cfl = 0.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);  // both
  c.dt.reset();
  c.cfl = 1.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.cfl = 0.5;
  c.picard_max = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("Newtonian diffusion takes one Picard iteration") {
  const Scenario s = Scenario::decay(12, 12, 1.0, 0.3, 4);
  const FlowSolver solver(s.grid, s.boundary, FluidParams(0.5, 0.0), fixed_dt(0.01));
  const DiffuseResult d = solver.diffuse_implicit(solver.prepare_initial(s.initial_state()), 0.01);
  CHECK(d.picard_iterations == 1);
}

TEST_CASE("channel diffusion matches a tridiagonal solve") {
  // x-uniform profile: the implicit step reduces to u - dt mu u'' = u_in per column.
  const int ny = 16;
  const double mu = 0.7, dt = 0.1;
  const Scenario s = Scenario::channel(4, ny, 1.0, 1.0, 1.0);
  const FlowSolver solver(s.grid, s.boundary, FluidParams(mu, 0.0), fixed_dt(dt));
  const double dy = s.grid.dy();
  StaggeredField f(s.grid);
  std::vector<double> rhs(ny);
  for (int j = 0; j < ny; ++j) {
    const double y = s.grid.y_center(j);
    rhs[j] = y * (2.0 - y) + 0.3 * std::sin(5.0 * y);
    for (int i = 0; i <= s.grid.nx(); ++i) f.u(i, j) = rhs[j];
  }
  // Thomas algorithm; the wall ghost is the odd reflection, so the
  // boundary rows carry 3 on the diagonal.
  const double c = dt * mu / (dy * dy);
  std::vector<double> diag(ny, 1.0 + 2.0 * c), cp(ny), dp(ny), sol(ny);
  diag[0] += c;
  diag[ny - 1] += c;
  cp[0] = -c / diag[0];
  dp[0] = rhs[0] / diag[0];
  for (int j = 1; j < ny; ++j) {
    const double den = diag[j] + c * cp[j - 1];
    cp[j] = -c / den;
    dp[j] = (rhs[j] + c * dp[j - 1]) / den;
  }
  sol[ny - 1] = dp[ny - 1];
  for (int j = ny - 2; j >= 0; --j) sol[j] = dp[j] - cp[j] * sol[j + 1];

  const DiffuseResult d = solver.diffuse_implicit(f, dt);
  CHECK(d.picard_iterations == 1);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < s.grid.nx(); ++i) CHECK(d.field.u(i, j) == doctest::Approx(sol[j]).epsilon(1e-8));
  }
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i < s.grid.nx(); ++i) CHECK(std::abs(d.field.v(i, j)) < 1e-12);
  }
}

TEST_CASE("projection leaves a discretely solenoidal field") {
  const Scenario s = Scenario::cavity(16, 12, 1.0, 1.0);
  const FlowSolver solver(s.grid, s.boundary, FluidParams(1.0, 0.5), fixed_dt(0.01));
  StaggeredField f(s.grid);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int j = 0; j < s.grid.ny(); ++j) {
    for (int i = 1; i < s.grid.nx(); ++i) f.u(i, j) = d(rng);
  }
  for (int j = 1; j < s.grid.ny(); ++j) {
    for (int i = 0; i < s.grid.nx(); ++i) f.v(i, j) = d(rng);
  }
  apply_bcs(f, s.grid, s.boundary);
  const ProjectResult p = solver.pressure_project(f, 0.01);
  CHECK(p.max_divergence <= 10.0 * solver.config().poisson_tol);
  CHECK(max_abs_divergence(p.field, s.grid) <= 10.0 * solver.config().poisson_tol);
  // Projecting again changes nothing beyond the solver tolerance.
  const ProjectResult q = solver.pressure_project(p.field, 0.01);
  CHECK(norm_H(velocity_difference(q.field, p.field, s.grid), s.grid) < 1e-8);
}

TEST_CASE("explicit advection refuses CFL above one") {
  const Scenario s = Scenario::cavity(16, 16, 1.0, 1.0);
  const FlowSolver solver(s.grid, s.boundary, FluidParams(1.0, 0.5), fixed_dt(0.1));
  StaggeredField f = s.initial_state();
  apply_bcs(f, s.grid, s.boundary);
  CHECK_THROWS_AS(solver.step(f, 0.0), CflError);
}

TEST_CASE("viscous form is symmetric and bounded below by the Newtonian form") {
  const Scenario s = Scenario::cavity(10, 10, 1.0, 1.0);
  const FlowSolver solver(s.grid, s.boundary, FluidParams(1.0, 2.0), fixed_dt(0.01, 16.0));
  const BoundarySpec hom = s.boundary.homogeneous();
  StaggeredField a = random_solenoidal_field(s.grid, hom, 1, 1.0);
  StaggeredField b = random_solenoidal_field(s.grid, hom, 2, 1.0);
  const ViscosityField eta = solver.viscosity(a);
  CHECK(solver.viscous_form(a, b, eta) ==
        doctest::Approx(solver.viscous_form(b, a, eta)).epsilon(1e-13));
  CHECK(solver.dissipation_rate(a) >= solver.newtonian_form(a, a));
  for (int j = 0; j < s.grid.ny(); ++j) {
    for (int i = 0; i < s.grid.nx(); ++i) {
      CHECK(eta.cell(i, j) >= 1.0);
      CHECK(eta.cell(i, j) <= 16.0);
    }
  }
}

TEST_CASE("a step keeps walls, periodicity and incompressibility") {
  const Scenario s = Scenario::channel(8, 16, 1.0, 1.0, 1.0);
  const FlowSolver solver(s.grid, s.boundary, FluidParams(1.0, 0.5), fixed_dt(0.05), s.forcing());
  StaggeredField f = solver.prepare_initial(s.initial_state());
  double t = 0.0;
  for (int k = 0; k < 5; ++k) {
    const StepResult r = solver.step(f, t);
    f = r.state;
    t += r.stats.dt;
    CHECK(r.stats.max_divergence <= 10.0 * solver.config().poisson_tol);
    CHECK(r.stats.picard_iterations >= 1);
  }
  for (int i = 0; i < s.grid.nx(); ++i) {
    CHECK(f.v(i, 0) == 0.0);
    CHECK(f.v(i, s.grid.ny()) == 0.0);
  }
  for (int j = 0; j < s.grid.ny(); ++j) CHECK(f.u(0, j) == f.u(s.grid.nx(), j));
  // Pressure-driven channel flows in +x.
  CHECK(f.u(4, 8) > 0.0);
}

TEST_CASE("decay run comes to rest and the energy falls") {
  const Scenario s = Scenario::decay(16, 16, 1.0, 0.3, 5);
  SolveConfig cfg = fixed_dt(0.01);
  cfg.t_end = 5.0;
  const FlowSolver solver(s.grid, s.boundary, FluidParams(0.05, 0.05), cfg);
  RunOptions opts;
  opts.record_history = true;
  const RunResult r = solver.run_to_steady(s.initial_state(), opts);
  CHECK(r.reached_steady);
  const auto& h = r.report.series.at("norm_H");
  for (std::size_t k = 1; k < h.size(); ++k) CHECK(h[k] <= h[k - 1] * (1.0 + 1e-12));
  CHECK(r.report.assertions.at("divergence_within_10x_poisson_tol"));
  CHECK(r.history.size() == static_cast<std::size_t>(r.steps) + 1);
}

TEST_CASE("cfl-driven step size") {
  const Scenario s = Scenario::cavity(16, 16, 1.0, 2.0);
  SolveConfig cfg;
  cfg.cfl = 0.5;
  cfg.t_end = 1.0;
  const FlowSolver solver(s.grid, s.boundary, FluidParams(1.0, 0.0), cfg);
  const StaggeredField f = s.initial_state();
  CHECK(solver.time_step(f) == doctest::Approx(0.5 * s.grid.dx() / 2.0));
}
