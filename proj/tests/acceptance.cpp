// Acceptance run: one PASS/FAIL line per criterion, details underneath.
// Exit status is 0 only when every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "bingham/continuation.hpp"
#include "bingham/diagnostics.hpp"
#include "bingham/operators.hpp"
#include "bingham/scenario.hpp"
#include "bingham/verify.hpp"
#include "reference.hpp"

using namespace bingham;

namespace {

struct Outcome {
  bool pass = false;
  std::vector<std::string> lines;
  void note(const char* fmt, ...) __attribute__((format(printf, 2, 3)));
};

void Outcome::note(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  lines.emplace_back(buf);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Largest post-projection divergence of every run made here, with its label.
struct DivergenceLog {
  std::vector<std::pair<std::string, double>> runs;
  void add(const std::string& label, const RunResult& r) {
    double worst = 0.0;
    const auto it = r.report.series.find("max_divergence");
    if (it != r.report.series.end()) {
      for (double d : it->second) worst = std::max(worst, d);
    }
    runs.emplace_back(label, worst);
  }
  void add(const std::string& label, double worst) { runs.emplace_back(label, worst); }
};

DivergenceLog g_div;

SolveConfig steady_config(double dt, double m, double t_end) {
  SolveConfig c;
  c.dt = dt;
  c.m = RegIndex(m);
  c.t_end = t_end;
  return c;
}

// 1. Constitutive property suite.
Outcome criterion_constitutive() {
  Outcome o;
  SuiteOptions opt;
  opt.pairs = 200000;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<CheckResult> checks = constitutive_property_suite(opt);
  const double wall = seconds_since(t0);
  bool ok = true;
  for (const CheckResult& c : checks) {
    ok = ok && c.passed;
    o.note("%s %s: %ld samples, %ld violations", c.passed ? "ok  " : "FAIL", c.name.c_str(),
           c.samples, c.violations);
  }
  o.note("%ld pairs in %.2f s (limit 10 s)", opt.pairs, wall);
  o.pass = ok && wall < 10.0;
  return o;
}

// 2. Newtonian channel and an m-sweep with tau_y = 0.
Outcome criterion_newtonian() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const FluidParams p(1.0, 0.0);
  const Scenario s = Scenario::channel(64, 64, 1.0, 1.0, 1.0);
  const SolveConfig cfg = steady_config(0.02, 2.0, 40.0);
  const FlowSolver solver(s.grid, s.boundary, p, cfg, s.forcing());
  const RunResult run = solver.run_to_steady(s.initial_state());
  g_div.add("newtonian channel", run);
  const double err = channel_profile_error(run.state, s, p, cfg.m);
  o.note("64x64 channel, tau_y = 0: relative L2 error vs parabola %.3e (limit 1e-2), steady %s",
         err, run.reached_steady ? "yes" : "no");

  MSchedule cold;
  cold.warm_start = false;
  const LimitReport sweep = run_m_sweep(s, p, cold, cfg);
  double worst = 0.0;
  for (const LimitEntry& e : sweep.entries) {
    g_div.add("newtonian sweep", e.max_divergence);
    for (int j = 0; j < s.grid.ny(); ++j) {
      for (int i = 0; i <= s.grid.nx(); ++i) {
        worst = std::max(worst, std::abs(e.state.u(i, j) - sweep.entries.front().state.u(i, j)));
      }
    }
    for (int j = 0; j <= s.grid.ny(); ++j) {
      for (int i = 0; i < s.grid.nx(); ++i) {
        worst = std::max(worst, std::abs(e.state.v(i, j) - sweep.entries.front().state.v(i, j)));
      }
    }
  }
  o.note("m in {2..64}: max |u_m - u_2| = %.3e (limit 1e-12)", worst);
  const double wall = seconds_since(t0);
  o.note("runtime %.1f s (limit 120 s)", wall);
  o.pass = err <= 1e-2 && worst <= 1e-12 && run.reached_steady && wall < 120.0;
  return o;
}

// 3. Bingham channel against the bi-viscosity oracle.
Outcome criterion_bingham_channel() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const FluidParams p(1.0, 0.5);
  const Scenario s = Scenario::channel(32, 128, 1.0, 1.0, 1.0);
  const SolveConfig cfg = steady_config(0.05, 64.0, 40.0);
  const FlowSolver solver(s.grid, s.boundary, p, cfg, s.forcing());
  const RunResult run = solver.run_to_steady(s.initial_state());
  g_div.add("bingham channel", run);
  const double err = channel_profile_error(run.state, s, p, cfg.m);
  const double plug = detect_plug_half_width(run.state, s, p, cfg.m);
  const double oracle = channel_plug_half_width(1.0, 1.0, p, cfg.m);
  const double dy = s.grid.dy();
  const double wall = seconds_since(t0);
  o.note("32x128, m = 64: relative L2 error vs oracle %.3e (limit 2e-2), %d steps, steady %s",
         err, run.steps, run.reached_steady ? "yes" : "no");
  o.note("plug half-width %.5f, oracle %.5f, |diff| = %.5f (cell %.5f)", plug, oracle,
         std::abs(plug - oracle), dy);
  o.note("runtime %.1f s (limit 600 s)", wall);
  o.pass = err <= 2e-2 && std::abs(plug - oracle) <= dy && run.reached_steady && wall < 600.0;
  return o;
}

// 4. m-sweep limit program on the Bingham channel.
Outcome criterion_sweep() {
  Outcome o;
  const FluidParams p(1.0, 0.5);
  const Scenario s = Scenario::channel(16, 64, 1.0, 1.0, 1.0);
  const SolveConfig cfg = steady_config(0.05, 64.0, 40.0);
  const LimitReport rep = run_m_sweep(s, p, MSchedule{}, cfg);
  o.note("%6s %12s %9s %12s %12s %6s %9s %9s", "m", "delta_H", "yielded", "max|tau|_un",
         "bound", "viol", "plug", "oracle");
  for (const LimitEntry& e : rep.entries) {
    g_div.add("bingham sweep", e.max_divergence);
    o.note("%6g %12.4e %9.4f %12.6f %12.6f %6ld %9.5f %9.5f", e.m, e.delta_H, e.yielded_fraction,
           e.max_unyielded_stress, e.stress_bound, e.bound_violations, e.plug_half_width,
           e.oracle_plug_half_width);
  }
  o.note("limit plug half-width tau_y / (sqrt 2 G) = %.5f, cell %.5f", rep.bingham_plug_half_width,
         rep.cell_size);
  bool ok = true;
  for (const auto& [k, v] : rep.assertions()) {
    o.note("%s %s", v ? "ok  " : "FAIL", k.c_str());
    ok = ok && v;
  }
  o.pass = ok;
  return o;
}

// 5. Energy equality on the unforced decay run.
Outcome criterion_energy() {
  Outcome o;
  const FluidParams p(0.05, 0.05);
  const Scenario s = Scenario::decay(32, 32, 1.0, 0.5, 7);
  const double t_span = 0.5;
  std::vector<double> residuals;
  bool coercive = true;
  long intervals = 0;
  for (double dt : {0.01, 0.005, 0.0025}) {
    SolveConfig cfg = steady_config(dt, 8.0, t_span);
    cfg.steady_tol = 1e-14;  // run the whole span
    const FlowSolver solver(s.grid, s.boundary, p, cfg, s.forcing());
    RunOptions opts;
    opts.record_history = true;
    const RunResult run = solver.run_to_steady(s.initial_state(), opts);
    g_div.add("decay", run);
    if (std::abs(run.t - t_span) > 1e-9) o.note("run stopped early at t = %g", run.t);
    const EnergyLedger whole = energy_audit(run.history, solver, 0.0, run.t);
    residuals.push_back(std::abs(whole.residual));
    for (const EnergyLedger& l : energy_ledgers(run.history, solver, 1)) {
      ++intervals;
      coercive = coercive && l.dissipation >= l.coercive_floor;
    }
    o.note("dt = %-7g E(T) - E(0) = %+.6e, dissipation %.6e, floor %.6e, residual %+.3e", dt,
           whole.kinetic_end - whole.kinetic_start, whole.dissipation, whole.coercive_floor,
           whole.residual);
  }
  const double q1 = std::log2(residuals[0] / residuals[1]);
  const double q2 = std::log2(residuals[1] / residuals[2]);
  o.note("observed orders %.3f, %.3f (need >= 1)", q1, q2);
  o.note("dissipation >= coercive floor on %ld of %ld intervals", coercive ? intervals : -1L,
         intervals);
  o.pass = q1 >= 1.0 && q2 >= 1.0 && coercive;
  return o;
}

// 6. Variational inequality at the steady cavity.
struct ViStudy {
  double h = 0.0;
  double min_residual = 0.0;
  double regularization_bound = 0.0;
  std::vector<double> residuals;
};

ViStudy vi_study(int n, const FluidParams& p, double m) {
  const Scenario s = Scenario::cavity(n, n, 1.0, 1.0);
  SolveConfig cfg = steady_config(0.01, m, 40.0);
  const FlowSolver solver(s.grid, s.boundary, p, cfg, s.forcing());
  RunOptions opts;
  opts.record_history = true;
  opts.record_every = 1;
  RunResult run = solver.run_to_steady(s.initial_state(), opts);
  g_div.add("cavity", run);
  History last(run.history.end() - 2, run.history.end());
  ViStudy st;
  st.h = s.grid.dx();
  const double scale = norm_H(run.state, s.grid);
  const BoundarySpec hom = s.boundary.homogeneous();
  for (int k = 0; k < 20; ++k) {
    // Amplitudes from 1e-3 to 1 of the flow, twenty seeds.
    const double amp = scale * std::pow(10.0, -3.0 + 3.0 * k / 19.0);
    const StaggeredField psi = random_solenoidal_field(s.grid, hom, 1000 + k, amp, 2 + k % 4);
    StaggeredField phi = run.state;
    for (int j = 0; j < s.grid.ny(); ++j) {
      for (int i = 0; i <= s.grid.nx(); ++i) phi.u(i, j) += psi.u(i, j);
    }
    for (int j = 0; j <= s.grid.ny(); ++j) {
      for (int i = 0; i < s.grid.nx(); ++i) phi.v(i, j) += psi.v(i, j);
    }
    apply_bcs(phi, s.grid, s.boundary);
    st.residuals.push_back(vi_residual(last, phi, solver));
  }
  st.min_residual = *std::min_element(st.residuals.begin(), st.residuals.end());
  st.regularization_bound = 2.0 * p.tau_y() * gamma_m(p, cfg.m) * s.grid.lx() * s.grid.ly();
  return st;
}

Outcome criterion_vi() {
  Outcome o;
  const FluidParams p(1.0, 1.0);
  const double m = 16.0;
  const ViStudy coarse = vi_study(16, p, m);
  const ViStudy fine = vi_study(32, p, m);
  for (const ViStudy* st : {&coarse, &fine}) {
    o.note("h = %.5f: min residual %+.4e over %zu fields", st->h, st->min_residual,
           st->residuals.size());
  }
  // The negative part is discretization defect; the coarser level bounds it.
  const double tol_vi = std::max(0.0, -coarse.min_residual);
  const double neg_fine = std::max(0.0, -fine.min_residual);
  const double order = neg_fine > 0.0 ? std::log2(tol_vi / neg_fine) : INFINITY;
  o.note("tol_VI = %.4e (negative defect at h = %.5f), observed order of the defect %.2f",
         tol_vi, coarse.h, order);
  o.note("analytic regularization floor 2 tau_y gamma_m |Omega| = %.4e (not used)",
         fine.regularization_bound);
  std::string vals;
  long below = 0;
  for (double r : fine.residuals) {
    char b[32];
    std::snprintf(b, sizeof b, " %+.2e", r);
    vals += b;
    if (r < -tol_vi) ++below;
  }
  o.note("fine residuals:%s", vals.c_str());
  o.note("%ld of %zu below -tol_VI", below, fine.residuals.size());
  o.pass = below == 0 && fine.residuals.size() == 20;
  return o;
}

// 7. Twin channel runs from perturbed data.
Outcome criterion_uniqueness() {
  Outcome o;
  const FluidParams p(1.0, 0.5);
  const Scenario s = Scenario::channel(16, 64, 1.0, 1.0, 1.0);
  const SolveConfig cfg = steady_config(0.05, 64.0, 40.0);
  const FlowSolver solver(s.grid, s.boundary, p, cfg, s.forcing());
  const StaggeredField base = s.initial_state();
  const StaggeredField delta = random_solenoidal_field(s.grid, s.boundary, 99, 1e-3);
  const DecayReport rep = perturbation_decay(base, delta, solver);
  o.note("d0 = %.4e, final difference %.4e (steady_tol %.1e), c_fit = %.4e, %d steps", rep.d0,
         rep.final_difference, cfg.steady_tol, rep.c_fit, rep.steps);
  o.note("both steady %s, within envelope %s, monotone %s", rep.both_steady ? "yes" : "no",
         rep.within_envelope ? "yes" : "no", rep.monotone ? "yes" : "no");
  o.pass = rep.both_steady && rep.within_envelope && rep.final_difference <= cfg.steady_tol;
  return o;
}

// 9. Operator oracles and strain refinement.
Outcome criterion_operators() {
  Outcome o;
  double worst = 0.0;
  struct Case {
    const char* name;
    Grid g;
    BoundarySpec bc;
  };
  const std::vector<Case> cases{{"box", Grid(7, 5, 1.0, 0.8), BoundarySpec::no_slip_box()},
                                {"lid", Grid(6, 6, 1.0, 1.0), BoundarySpec::lid_driven(1.3)},
                                {"periodic", Grid(8, 6, 2.0, 1.0),
                                 BoundarySpec::periodic_channel()}};
  for (const Case& c : cases) {
    const ref::Layout l(c.g, c.bc);
    const ref::DenseAffine strain = ref::strain_matrix(l);
    const ref::DenseAffine div = ref::divergence_matrix(l);
    double w_case = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const std::vector<double> x = l.random(seed);
      const StaggeredField f = l.to_field(x);
      const TensorField d = compute_strain(f, c.g);
      const CellField dv = compute_divergence(f, c.g);
      const std::vector<double> ds = strain.apply(x);
      const std::vector<double> dd = div.apply(x);
      std::size_t k = 0;
      for (int j = 0; j < c.g.ny(); ++j) {
        for (int i = 0; i < c.g.nx(); ++i, ++k) {
          const double scale = std::max({1.0, std::abs(ds[3 * k]), std::abs(ds[3 * k + 1]),
                                         std::abs(ds[3 * k + 2])});
          w_case = std::max(w_case, std::abs(d(i, j).xx - ds[3 * k]) / scale);
          w_case = std::max(w_case, std::abs(d(i, j).yy - ds[3 * k + 1]) / scale);
          w_case = std::max(w_case, std::abs(d(i, j).xy - ds[3 * k + 2]) / scale);
          w_case = std::max(w_case, std::abs(dv(i, j) - dd[k]) / std::max(1.0, std::abs(dd[k])));
        }
      }
      const double nh = ref::norm_h(l, x), nv = ref::norm_v(l, x);
      w_case = std::max(w_case, std::abs(norm_H(f, c.g) - nh) / nh);
      w_case = std::max(w_case, std::abs(norm_V(f, c.g) - nv) / nv);
    }
    o.note("%-8s %dx%d: max relative deviation from dense recomputation %.3e", c.name, c.g.nx(),
           c.g.ny(), w_case);
    worst = std::max(worst, w_case);
  }

  // Smooth solenoidal field vanishing on the walls of the unit box.
  const double pi = std::acos(-1.0);
  auto u_fn = [&](double x, double y) {
    return std::pow(std::sin(pi * x), 2) * 2.0 * pi * std::sin(pi * y) * std::cos(pi * y);
  };
  auto v_fn = [&](double x, double y) {
    return -2.0 * pi * std::sin(pi * x) * std::cos(pi * x) * std::pow(std::sin(pi * y), 2);
  };
  auto exact = [&](double x, double y) {
    const double sx = std::sin(pi * x), cx = std::cos(pi * x);
    const double sy = std::sin(pi * y), cy = std::cos(pi * y);
    const double ux = 2.0 * pi * pi * 2.0 * sx * cx * sy * cy;
    const double uy = 2.0 * pi * pi * sx * sx * (cy * cy - sy * sy);
    const double vx = -2.0 * pi * pi * (cx * cx - sx * sx) * sy * sy;
    return SymTensor2{ux, -ux, 0.5 * (uy + vx)};
  };
  std::vector<double> errs;
  std::vector<int> ns{16, 32, 64, 128};
  for (int n : ns) {
    const Grid g(n, n, 1.0, 1.0);
    StaggeredField f = sample_velocity(g, u_fn, v_fn);
    apply_bcs(f, g, BoundarySpec::no_slip_box());
    const TensorField d = compute_strain(f, g);
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const SymTensor2 e = d(i, j) - exact(g.x_center(i), g.y_center(j));
        s += contract(e, e);
      }
    }
    errs.push_back(std::sqrt(s * g.cell_area()));
  }
  double min_order = 1e300;
  std::string orders;
  for (std::size_t k = 0; k + 1 < errs.size(); ++k) {
    const double q = std::log2(errs[k] / errs[k + 1]);
    min_order = std::min(min_order, q);
    char b[64];
    std::snprintf(b, sizeof b, " %d->%d: %.3f", ns[k], ns[k + 1], q);
    orders += b;
  }
  o.note("strain L2 errors %.3e %.3e %.3e %.3e; orders%s", errs[0], errs[1], errs[2], errs[3],
         orders.c_str());
  o.pass = worst <= 1e-12 && min_order >= 1.9;
  return o;
}

// 8. Incompressibility across every run above.
Outcome criterion_divergence() {
  Outcome o;
  const double limit = 10.0 * SolveConfig{}.poisson_tol;
  bool ok = !g_div.runs.empty();
  double worst = 0.0;
  for (const auto& [label, d] : g_div.runs) {
    worst = std::max(worst, d);
    ok = ok && d <= limit;
  }
  o.note("%zu runs, worst max|div u| = %.3e (limit %.1e)", g_div.runs.size(), worst, limit);
  o.pass = ok;
  return o;
}

}  // namespace

int main() {
  struct Item {
    int id;
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Item> items{
      {1, "constitutive property suite", criterion_constitutive},
      {2, "Newtonian channel regression", criterion_newtonian},
      {3, "Bingham channel vs oracle", criterion_bingham_channel},
      {4, "m-sweep limit program", criterion_sweep},
      {5, "energy equality on decay", criterion_energy},
      {6, "variational inequality at steady cavity", criterion_vi},
      {7, "twin-run uniqueness", criterion_uniqueness},
      {9, "discrete operator oracles", criterion_operators},
      {8, "incompressibility of every run", criterion_divergence},
  };
  int failed = 0;
  std::vector<std::pair<int, std::string>> summary;
  for (const Item& it : items) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note("exception: %s", e.what());
    }
    char head[160];
    std::snprintf(head, sizeof head, "[%s] criterion %d: %s (%.1f s)", o.pass ? "PASS" : "FAIL",
                  it.id, it.title, seconds_since(t0));
    std::printf("%s\n", head);
    for (const std::string& l : o.lines) std::printf("       %s\n", l.c_str());
    std::fflush(stdout);
    summary.emplace_back(it.id, head);
    if (!o.pass) ++failed;
  }
  std::sort(summary.begin(), summary.end());
  std::printf("\nsummary\n");
  for (const auto& [id, line] : summary) std::printf("%s\n", line.c_str());
  std::printf("%d of %zu criteria failed\n", failed, items.size());
  return failed == 0 ? 0 : 1;
}
