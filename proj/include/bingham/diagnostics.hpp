/// @file diagnostics.hpp
/// @brief Post-hoc checks on recorded trajectories: energy balance, weak-form
/// and variational-inequality residuals, a-priori norms, perturbation decay.
///
/// All assemblies reuse the solver's stencils and quadrature so that the
/// residuals measure time-discretization defect rather than a mismatch
/// between the scheme and the check.
#pragma once

#include <vector>

#include "bingham/report.hpp"
#include "bingham/solver.hpp"

namespace bingham {

/// Relative slack for inequalities that hold exactly in real arithmetic but
/// are evaluated with rounded operations.
inline constexpr double kRoundingSlack = 1e-12;

/// Throws std::invalid_argument unless `test` is discretely solenoidal
/// (max |div| <= 10 poisson_tol, scaled by max |test| when larger than 1) and
/// satisfies the given boundary spec on its wall faces.
void require_admissible(const StaggeredField& test, const FlowSolver& solver,
                        const BoundarySpec& bc, const char* where);

/// Defect of the discrete weak form tested against a solenoidal, no-slip phi:
/// sum_n <u^{n+1} - u^n, phi> + dt (a(u^{n+1}; u^{n+1}, phi) + <N(u^n), phi> - <f^{n+1}, phi>).
double weak_residual(const History& history, const StaggeredField& test, const FlowSolver& solver);

/// Energy balance over [s1, s2] with trapezoidal time quadrature. s1 and s2
/// must coincide with recorded times (relative 1e-9 of the time span);
/// otherwise std::out_of_range is thrown.
EnergyLedger energy_audit(const History& history, const FlowSolver& solver, double s1, double s2);

/// One ledger per group of `stride` consecutive recorded intervals.
std::vector<EnergyLedger> energy_ledgers(const History& history, const FlowSolver& solver,
                                         int stride = 1);

/// Pointwise-in-time variational-inequality residual at the last recorded
/// state u, with the Bingham terms:
///   <du/dt, phi - u> + <N(u), phi> + 2 mu (Du, D(phi - u))
///   + tau_y (|D phi|_1 - |Du|_1) - <f, phi - u>.
/// du/dt is the backward difference of the last two states (0 for a single
/// state). phi must be solenoidal and carry the same wall data as u.
double vi_residual(const History& history, const StaggeredField& test, const FlowSolver& solver);

struct DecayReport {
  std::vector<double> t;
  std::vector<double> difference;    ///< ||u1 - u2||_H
  std::vector<double> integral_V2;   ///< int_0^t ||u1||_V^2
  std::vector<double> envelope;      ///< d0 exp(c int ||u1||_V^2)
  double d0 = 0.0;
  double c_fit = 0.0;
  double fit_fraction = 0.25;
  bool within_envelope = true;
  bool monotone = true;
  bool both_steady = false;
  double final_difference = 0.0;
  double final_ratio = 0.0;  ///< final / initial difference (0 when d0 = 0)
  int steps = 0;
};

/// Runs trajectories from base and base + delta in lockstep (same dt) until
/// both are steady or t_end. The constant c is the smallest value that keeps
/// the envelope above the difference over the first `fit_fraction` of the
/// samples; the envelope is then checked on the whole run.
DecayReport perturbation_decay(const StaggeredField& base, const StaggeredField& delta,
                               const FlowSolver& solver, double fit_fraction = 0.25);

struct AprioriReport {
  double sup_H = 0.0;
  double int_V2 = 0.0;    ///< int ||u||_V^2 dt
  double int_tau2 = 0.0;  ///< int int |tau_m(Du)|^2 dx dt
  long growth_checks = 0;
  long growth_violations = 0;

  void append_to(RunReport& report) const;
};

/// Trapezoidal a-priori norms plus the cellwise growth check
/// |tau_m(D)| <= tau_y + 2 mu |D| on every recorded state.
AprioriReport apriori_tracker(const History& history, const FlowSolver& solver);

/// Trapezoidal rule for samples y(t).
double trapezoid(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace bingham
