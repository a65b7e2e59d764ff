#include "bingham/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bingham/operators.hpp"

namespace bingham {

namespace {

StaggeredField with_bcs(const StaggeredField& f, const Grid& g, const BoundarySpec& bc) {
  StaggeredField out = f;
  apply_bcs(out, g, bc);
  return out;
}

double wall_defect(const StaggeredField& f, const Grid& g, const BoundarySpec& bc) {
  double d = 0.0;
  if (!bc.periodic_x()) {
    for (int j = 0; j < g.ny(); ++j) {
      d = std::max({d, std::abs(f.u(0, j)), std::abs(f.u(g.nx(), j))});
    }
  }
  for (int i = 0; i < g.nx(); ++i) {
    d = std::max({d, std::abs(f.v(i, 0)), std::abs(f.v(i, g.ny()))});
  }
  return d;
}

std::size_t find_time(const History& h, double s, double span) {
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (std::abs(h[k].t - s) <= 1e-9 * span) return k;
  }
  throw std::out_of_range("time " + std::to_string(s) + " is not a recorded history time");
}

}  // namespace

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t k = 1; k < t.size() && k < y.size(); ++k) {
    s += 0.5 * (t[k] - t[k - 1]) * (y[k] + y[k - 1]);
  }
  return s;
}

void require_admissible(const StaggeredField& test, const FlowSolver& solver,
                        const BoundarySpec& bc, const char* where) {
  const Grid& g = solver.grid();
  require_matches(test, g, where);
  const StaggeredField t = with_bcs(test, g, bc);
  double scale = 1.0;
  for (double x : t.u.raw()) scale = std::max(scale, std::abs(x));
  for (double x : t.v.raw()) scale = std::max(scale, std::abs(x));
  const double div = max_abs_divergence(t, g);
  if (div > 10.0 * solver.config().poisson_tol * scale) {
    throw std::invalid_argument(std::string(where) + ": test field is not solenoidal (max |div| " +
                                std::to_string(div) + ")");
  }
  if (wall_defect(test, g, bc) != 0.0) {
    throw std::invalid_argument(std::string(where) + ": test field violates the wall conditions");
  }
}

double weak_residual(const History& history, const StaggeredField& test,
                     const FlowSolver& solver) {
  const Grid& g = solver.grid();
  const BoundarySpec hom = solver.boundary().homogeneous();
  require_admissible(test, solver, hom, "weak_residual");
  const StaggeredField phi = with_bcs(test, g, hom);
  double r = 0.0;
  for (std::size_t n = 0; n + 1 < history.size(); ++n) {
    const StaggeredField& a = history[n].state;
    const StaggeredField& b = history[n + 1].state;
    const double dt = history[n + 1].t - history[n].t;
    r += inner_H(velocity_difference(b, a, g), phi, g);
    r += dt * (solver.viscous_form(b, phi, solver.viscosity(b)) +
               solver.advection_pairing(a, phi) - solver.forcing_pairing(phi, history[n + 1].t));
  }
  return r;
}

EnergyLedger energy_audit(const History& history, const FlowSolver& solver, double s1, double s2) {
  if (history.empty()) throw std::out_of_range("energy_audit: empty history");
  if (!(s1 < s2)) throw std::out_of_range("energy_audit: need s1 < s2");
  const double span = std::max(history.back().t - history.front().t, 1e-300);
  const std::size_t k1 = find_time(history, s1, span);
  const std::size_t k2 = find_time(history, s2, span);
  const Grid& g = solver.grid();

  EnergyLedger led;
  led.s1 = history[k1].t;
  led.s2 = history[k2].t;
  const double h1 = norm_H(history[k1].state, g);
  const double h2 = norm_H(history[k2].state, g);
  led.kinetic_start = 0.5 * h1 * h1;
  led.kinetic_end = 0.5 * h2 * h2;

  double prev_diss = solver.dissipation_rate(history[k1].state);
  double prev_floor = solver.newtonian_form(history[k1].state, history[k1].state);
  double prev_work = solver.forcing_pairing(history[k1].state, history[k1].t);
  for (std::size_t k = k1 + 1; k <= k2; ++k) {
    const StaggeredField& s = history[k].state;
    const double dt = history[k].t - history[k - 1].t;
    const double diss = solver.dissipation_rate(s);
    const double floor = solver.newtonian_form(s, s);
    const double work = solver.forcing_pairing(s, history[k].t);
    led.dissipation += 0.5 * dt * (diss + prev_diss);
    led.coercive_floor += 0.5 * dt * (floor + prev_floor);
    led.work += 0.5 * dt * (work + prev_work);
    prev_diss = diss;
    prev_floor = floor;
    prev_work = work;
  }
  led.residual = led.kinetic_end + led.dissipation - led.work - led.kinetic_start;
  return led;
}

std::vector<EnergyLedger> energy_ledgers(const History& history, const FlowSolver& solver,
                                         int stride) {
  std::vector<EnergyLedger> out;
  const std::size_t step = static_cast<std::size_t>(std::max(1, stride));
  for (std::size_t k = 0; k + 1 < history.size(); k += step) {
    const std::size_t e = std::min(k + step, history.size() - 1);
    out.push_back(energy_audit(history, solver, history[k].t, history[e].t));
  }
  return out;
}

double vi_residual(const History& history, const StaggeredField& test, const FlowSolver& solver) {
  if (history.empty()) throw std::invalid_argument("vi_residual: empty history");
  const Grid& g = solver.grid();
  const BoundarySpec& bc = solver.boundary();
  require_admissible(test, solver, bc, "vi_residual");
  const StaggeredField phi = with_bcs(test, g, bc);
  const StaggeredField u = with_bcs(history.back().state, g, bc);
  const double t = history.back().t;
  StaggeredField w = velocity_difference(phi, u, g);
  apply_bcs(w, g, bc.homogeneous());

  double r = 0.0;
  if (history.size() >= 2) {
    const Snapshot& prev = history[history.size() - 2];
    const double dt = t - prev.t;
    if (dt > 0.0) r += inner_H(velocity_difference(u, prev.state, g), w, g) / dt;
  }
  r += solver.advection_pairing(u, phi);
  r += solver.newtonian_form(u, w);
  const TensorField dphi = compute_strain(phi, g);
  const TensorField du = compute_strain(u, g);
  double plastic = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      plastic += tensor_norm(dphi(i, j)) - tensor_norm(du(i, j));
    }
  }
  r += solver.params().tau_y() * plastic * g.cell_area();
  r -= solver.forcing_pairing(w, t);
  return r;
}

DecayReport perturbation_decay(const StaggeredField& base, const StaggeredField& delta,
                               const FlowSolver& solver, double fit_fraction) {
  const Grid& g = solver.grid();
  require_matches(base, g, "perturbation_decay");
  require_matches(delta, g, "perturbation_decay");
  StaggeredField b2 = base;
  for (std::size_t k = 0; k < b2.u.raw().size(); ++k) b2.u.raw()[k] += delta.u.raw()[k];
  for (std::size_t k = 0; k < b2.v.raw().size(); ++k) b2.v.raw()[k] += delta.v.raw()[k];
  StaggeredField s1 = solver.prepare_initial(with_bcs(base, g, solver.boundary()));
  StaggeredField s2 = solver.prepare_initial(with_bcs(b2, g, solver.boundary()));

  DecayReport rep;
  rep.fit_fraction = fit_fraction;
  rep.d0 = norm_H(velocity_difference(s1, s2, g), g);
  rep.t.push_back(0.0);
  rep.difference.push_back(rep.d0);
  rep.integral_V2.push_back(0.0);
  double prev_v2 = std::pow(norm_V(s1, g), 2);

  const double t_stop = solver.config().t_end * (1.0 - 1e-12);
  const double tol = solver.config().steady_tol;
  double t = 0.0;
  while (t < t_stop) {
    const double dt = std::min(solver.time_step(s1), solver.time_step(s2));
    StepResult a = solver.step(s1, t, dt);
    StepResult b = solver.step(s2, t, dt);
    const double c1 = norm_H(velocity_difference(a.state, s1, g), g) / dt;
    const double c2 = norm_H(velocity_difference(b.state, s2, g), g) / dt;
    s1 = std::move(a.state);
    s2 = std::move(b.state);
    t += dt;
    ++rep.steps;
    const double v2 = std::pow(norm_V(s1, g), 2);
    rep.t.push_back(t);
    rep.difference.push_back(norm_H(velocity_difference(s1, s2, g), g));
    rep.integral_V2.push_back(rep.integral_V2.back() + 0.5 * dt * (v2 + prev_v2));
    prev_v2 = v2;
    if (c1 < tol && c2 < tol) {
      rep.both_steady = true;
      break;
    }
  }

  const std::size_t n = rep.t.size();
  const std::size_t n_fit = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(fit_fraction * static_cast<double>(n))));
  if (rep.d0 > 0.0) {
    for (std::size_t k = 1; k < std::min(n, n_fit); ++k) {
      if (rep.integral_V2[k] > 0.0 && rep.difference[k] > rep.d0) {
        rep.c_fit = std::max(rep.c_fit, std::log(rep.difference[k] / rep.d0) / rep.integral_V2[k]);
      }
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double env = rep.d0 * std::exp(rep.c_fit * rep.integral_V2[k]);
    rep.envelope.push_back(env);
    if (rep.difference[k] > env * (1.0 + kRoundingSlack)) rep.within_envelope = false;
    if (k > 0 && rep.difference[k] > rep.difference[k - 1] * (1.0 + kRoundingSlack)) {
      rep.monotone = false;
    }
  }
  rep.final_difference = rep.difference.back();
  rep.final_ratio = rep.d0 > 0.0 ? rep.final_difference / rep.d0 : 0.0;
  return rep;
}

void AprioriReport::append_to(RunReport& report) const {
  report.scalars["sup_norm_H"] = sup_H;
  report.scalars["int_norm_V2"] = int_V2;
  report.scalars["int_tau2"] = int_tau2;
  report.scalars["growth_checks"] = static_cast<double>(growth_checks);
  report.scalars["growth_violations"] = static_cast<double>(growth_violations);
  report.assertions["growth_bound_cellwise"] = growth_violations == 0;
}

AprioriReport apriori_tracker(const History& history, const FlowSolver& solver) {
  AprioriReport rep;
  if (history.empty()) return rep;
  const Grid& g = solver.grid();
  const FluidParams& p = solver.params();
  std::vector<double> t, v2, tau2;
  for (const Snapshot& s : history) {
    rep.sup_H = std::max(rep.sup_H, norm_H(s.state, g));
    t.push_back(s.t);
    v2.push_back(std::pow(norm_V(s.state, g), 2));
    const TensorField d = compute_strain(s.state, g);
    double acc = 0.0;
    for (const SymTensor2& a : d.values()) {
      const SymTensor2 tau = biviscosity_stress(a, p, solver.reg());
      const double tn = tensor_norm(tau);
      acc += tn * tn;
      ++rep.growth_checks;
      const double bound = p.tau_y() + 2.0 * p.mu() * tensor_norm(a);
      if (tn > bound * (1.0 + kRoundingSlack)) ++rep.growth_violations;
    }
    tau2.push_back(acc * g.cell_area());
  }
  rep.int_V2 = trapezoid(t, v2);
  rep.int_tau2 = trapezoid(t, tau2);
  return rep;
}

}  // namespace bingham
