#include <doctest.h>

#include <string>

#include "bingham/continuation.hpp"
#include "bingham/operators.hpp"

using namespace bingham;

TEST_CASE("yield classification") {
  const Grid g(4, 4, 1.0, 1.0);
  const TensorField zero(g);
  for (YieldState s : classify_yield(zero, FluidParams(1.0, 0.5), RegIndex(4.0))) {
    CHECK(s == YieldState::Unyielded);
  }
  // Linear shear u = y has |D| = 1/sqrt 2 everywhere.
  const StaggeredField f = sample_velocity(
      g, [](double, double y) { return y; }, [](double, double) { return 0.0; });
  const TensorField d = compute_strain(f, g);
  const FluidParams p(1.0, 0.5);
  // gamma_m = 0.5 / (2 (m - 1)): below 1/sqrt 2 for m = 2.
  for (YieldState s : classify_yield(d, p, RegIndex(2.0))) CHECK(s == YieldState::Yielded);
  for (YieldState s : classify_yield(d, FluidParams(1.0, 0.0), RegIndex(2.0))) {
    CHECK(s == YieldState::Yielded);
  }
  for (YieldState s : classify_yield(d, FluidParams(0.1, 5.0), RegIndex(2.0))) {
    CHECK(s == YieldState::Unyielded);
  }
}

TEST_CASE("schedule validation") {
  MSchedule s;
  CHECK_NOTHROW(s.validate());
  s.values = {};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.values = {2.0, 2.0};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.values = {1.5, 4.0};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.values = {4.0, 2.0};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("Newtonian sweep does not depend on m") {
  const Scenario s = Scenario::channel(4, 16, 1.0, 1.0, 1.0);
  SolveConfig cfg;
  cfg.dt = 0.05;
  cfg.t_end = 50.0;
  cfg.steady_tol = 1e-9;
  MSchedule sched;
  sched.values = {2.0, 8.0, 32.0};
  sched.warm_start = false;
  const LimitReport rep = run_m_sweep(s, FluidParams(1.0, 0.0), sched, cfg);
  REQUIRE(rep.entries.size() == 3);
  CHECK(rep.all_steady());
  for (const LimitEntry& e : rep.entries) {
    CHECK(e.delta_H <= 1e-12);
    CHECK(e.plug_half_width == 0.0);
    CHECK(e.profile_error < 1e-2);
  }
}

TEST_CASE("channel sweep narrows the plug") {
  const Scenario s = Scenario::channel(4, 32, 1.0, 1.0, 1.0);
  SolveConfig cfg;
  cfg.dt = 0.05;
  cfg.t_end = 50.0;
  cfg.steady_tol = 1e-7;
  MSchedule sched;
  sched.values = {2.0, 4.0, 8.0};
  const LimitReport rep = run_m_sweep(s, FluidParams(1.0, 0.3), sched, cfg);
  REQUIRE(rep.entries.size() == 3);
  CHECK(rep.all_steady());
  CHECK(rep.plug_monotone());
  CHECK(rep.stress_bound_holds());
  CHECK(rep.plastic_branch_exact());
  CHECK(rep.cell_size == doctest::Approx(2.0 / 32));
  CHECK(rep.entries[0].delta_H == 0.0);
  for (const auto& [name, ok] : rep.assertions()) {
    INFO(name);
    CHECK(ok);
  }
}

TEST_CASE("decay sweep keeps the a-priori norms together") {
  const Scenario s = Scenario::decay(12, 12, 1.0, 0.3, 4);
  SolveConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 3.0;
  cfg.steady_tol = 1e-8;
  MSchedule sched;
  sched.values = {2.0, 8.0, 32.0};
  sched.warm_start = false;  // a warm start would begin from the previous rest state
  const LimitReport rep = run_m_sweep(s, FluidParams(0.05, 0.05), sched, cfg);
  CHECK(rep.sup_H_spread() < 0.05);
  CHECK(rep.stress_bound_holds());
}

TEST_CASE("sweep failures carry the offending m") {
  const Scenario s = Scenario::cavity(16, 16, 1.0, 1.0);
  SolveConfig cfg;
  cfg.dt = 0.5;  // lid Courant number 8
  cfg.t_end = 1.0;
  MSchedule sched;
  sched.values = {3.0, 6.0};
  try {
    run_m_sweep(s, FluidParams(1.0, 0.5), sched, cfg);
    FAIL("expected SweepError");
  } catch (const SweepError& e) {
    CHECK(e.m() == 3.0);
    CHECK(std::string(e.what()).rfind("m = 3: ", 0) == 0);
  }
}
