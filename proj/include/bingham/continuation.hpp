/// @file continuation.hpp
/// @brief Steady solves along an increasing schedule of m and the limit metrics.
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bingham/scenario.hpp"
#include "bingham/solver.hpp"

namespace bingham {

struct MSchedule {
  std::vector<double> values{2.0, 4.0, 8.0, 16.0, 32.0, 64.0};
  bool warm_start = true;

  /// Strictly increasing, every value >= 2. Throws std::invalid_argument.
  void validate() const;
  friend bool operator==(const MSchedule&, const MSchedule&) = default;
};

/// Per-cell branch membership: Yielded iff |D| > gamma_m. Row-major, i fastest.
std::vector<YieldState> classify_yield(const TensorField& d, const FluidParams& p,
                                       const RegIndex& r);

/// Half-width of the contiguous unyielded band around the channel centerline,
/// measured on the middle column. Zero when the centerline cells are yielded.
double detect_plug_half_width(const StaggeredField& f, const Scenario& s, const FluidParams& p,
                              const RegIndex& r);

/// Relative L2 error (over the middle column) of a channel state against the
/// bi-viscosity oracle.
double channel_profile_error(const StaggeredField& f, const Scenario& s, const FluidParams& p,
                             const RegIndex& r);

struct LimitEntry {
  double m = 2.0;
  StaggeredField state;
  double delta_H = 0.0;  ///< ||u_m - u_prev||_H; 0 for the first entry
  double yielded_fraction = 0.0;
  double fixed_threshold_unyielded_fraction = 0.0;  ///< |D| <= eps * shear scale
  double max_unyielded_stress = 0.0;
  double stress_bound = 0.0;  ///< m/(m-1) tau_y
  long bound_violations = 0;
  double yielded_deviation = 0.0;  ///< sup |tau_m - tau| over yielded cells
  double plug_half_width = 0.0;    ///< channel only
  double oracle_plug_half_width = 0.0;
  double profile_error = 0.0;  ///< channel only, relative L2 vs oracle
  double sup_H = 0.0;
  double int_V2 = 0.0;
  double max_divergence = 0.0;
  int steps = 0;
  int total_picard = 0;
  bool reached_steady = false;
};

struct LimitReport {
  ScenarioKind scenario = ScenarioKind::Channel;
  bool warm_start = true;
  double epsilon_yield = 1e-6;
  double cell_size = 0.0;  ///< dy, the plug tolerance
  double bingham_plug_half_width = 0.0;
  std::vector<LimitEntry> entries;

  bool deltas_nonincreasing() const;
  bool stress_bound_holds() const;
  bool plastic_branch_exact() const;
  /// Channel only: plug widths non-increasing in m and each within one cell
  /// of the oracle's core width. Always true for other scenarios.
  bool plug_monotone() const;
  bool plug_within_cell() const;
  bool all_steady() const;
  /// (max - min) / max across entries of sup_t ||u||_H and int ||u||_V^2.
  double sup_H_spread() const;
  double int_V2_spread() const;
  std::map<std::string, bool> assertions() const;
};

class SweepError : public SolverError {
 public:
  SweepError(double m, const std::string& what);
  double m() const { return m_; }

 private:
  double m_;
};

/// Steady solve for every m of the schedule. The cfg's own m is ignored.
/// Failures are rethrown as SweepError carrying the offending m.
LimitReport run_m_sweep(const Scenario& s, const FluidParams& p, const MSchedule& schedule,
                        const SolveConfig& cfg, double epsilon_yield = 1e-6);

}  // namespace bingham
