#include <doctest.h>

#include <cmath>

#include "bingham/diagnostics.hpp"
#include "bingham/operators.hpp"
#include "bingham/scenario.hpp"

using namespace bingham;

namespace {

struct DecayRun {
  Scenario s = Scenario::decay(16, 16, 1.0, 0.3, 8);
  FluidParams p{0.05, 0.05};
  SolveConfig cfg;
  RunResult run;
  std::optional<FlowSolver> solver;

  explicit DecayRun(double dt, double t_end = 0.3) {
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.m = RegIndex(8.0);
    cfg.steady_tol = 1e-14;
    solver.emplace(s.grid, s.boundary, p, cfg);
    RunOptions opts;
    opts.record_history = true;
    run = solver->run_to_steady(s.initial_state(), opts);
  }
};

}  // namespace

TEST_CASE("trapezoid rule") {
  CHECK(trapezoid({0.0, 1.0, 3.0}, {1.0, 3.0, 7.0}) == doctest::Approx(2.0 + 10.0));
  CHECK(trapezoid({0.0}, {5.0}) == 0.0);
  CHECK(trapezoid({}, {}) == 0.0);
}

TEST_CASE("energy audit bookkeeping") {
  const DecayRun d(0.01);
  const History& h = d.run.history;
  CHECK_THROWS_AS(energy_audit(h, *d.solver, 0.0, 0.005), std::out_of_range);
  CHECK_THROWS_AS(energy_audit(h, *d.solver, 0.2, 0.1), std::out_of_range);
  CHECK_THROWS_AS(energy_audit({}, *d.solver, 0.0, 0.1), std::out_of_range);
  const EnergyLedger all = energy_audit(h, *d.solver, 0.0, d.run.t);
  CHECK(all.kinetic_end < all.kinetic_start);
  CHECK(all.dissipation >= all.coercive_floor);
  CHECK(all.work == 0.0);
  CHECK(all.residual ==
        doctest::Approx(all.kinetic_end - all.kinetic_start + all.dissipation - all.work));
  // Ledgers over consecutive groups add up to the whole-run ledger.
  double diss = 0.0;
  for (const EnergyLedger& l : energy_ledgers(h, *d.solver, 5)) diss += l.dissipation;
  CHECK(diss == doctest::Approx(all.dissipation).epsilon(1e-12));
}

TEST_CASE("energy residual shrinks with dt") {
  const DecayRun a(0.01), b(0.005);
  const double ra = std::abs(energy_audit(a.run.history, *a.solver, 0.0, a.run.t).residual);
  const double rb = std::abs(energy_audit(b.run.history, *b.solver, 0.0, b.run.t).residual);
  CHECK(rb < 0.6 * ra);
}

TEST_CASE("weak-form defect is small and falls with dt") {
  const DecayRun a(0.01), b(0.005);
  const StaggeredField phi =
      random_solenoidal_field(a.s.grid, a.s.boundary.homogeneous(), 77, 1.0);
  const double ra = std::abs(weak_residual(a.run.history, phi, *a.solver));
  const double rb = std::abs(weak_residual(b.run.history, phi, *b.solver));
  CHECK(ra < 1e-2);
  CHECK(rb < ra);
}

TEST_CASE("test fields must be admissible") {
  const DecayRun d(0.01, 0.05);
  StaggeredField bad = random_solenoidal_field(d.s.grid, d.s.boundary, 3, 1.0);
  bad.u(3, 3) += 0.5;  // breaks the discrete divergence
  CHECK_THROWS_AS(vi_residual(d.run.history, bad, *d.solver), std::invalid_argument);
  CHECK_THROWS_AS(weak_residual(d.run.history, bad, *d.solver), std::invalid_argument);
  CHECK_THROWS_AS(vi_residual({}, bad, *d.solver), std::invalid_argument);
}

TEST_CASE("a-priori tracker") {
  const DecayRun d(0.01);
  const AprioriReport rep = apriori_tracker(d.run.history, *d.solver);
  CHECK(rep.sup_H == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(rep.int_V2 > 0.0);
  CHECK(rep.int_tau2 > 0.0);
  CHECK(rep.growth_checks > 0);
  CHECK(rep.growth_violations == 0);
  const AprioriReport none = apriori_tracker({}, *d.solver);
  CHECK(none.sup_H == 0.0);
  CHECK(none.growth_checks == 0);
}

TEST_CASE("identical twins stay identical") {
  const Scenario s = Scenario::decay(12, 12, 1.0, 0.2, 2);
  SolveConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.2;
  const FlowSolver solver(s.grid, s.boundary, FluidParams(0.1, 0.05), cfg);
  const StaggeredField zero(s.grid);
  const DecayReport rep = perturbation_decay(s.initial_state(), zero, solver);
  CHECK(rep.d0 == 0.0);
  CHECK(rep.final_difference == 0.0);
  CHECK(rep.within_envelope);
  CHECK(rep.monotone);
}

TEST_CASE("perturbed decay twins contract") {
  const Scenario s = Scenario::decay(12, 12, 1.0, 0.2, 2);
  SolveConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.5;
  const FlowSolver solver(s.grid, s.boundary, FluidParams(0.1, 0.05), cfg);
  const StaggeredField delta = random_solenoidal_field(s.grid, s.boundary, 5, 1e-3);
  const DecayReport rep = perturbation_decay(s.initial_state(), delta, solver);
  CHECK(rep.d0 == doctest::Approx(1e-3).epsilon(1e-6));
  CHECK(rep.within_envelope);
  CHECK(rep.final_difference < rep.d0);
  CHECK(rep.t.size() == rep.difference.size());
  CHECK(rep.t.size() == rep.envelope.size());
}
