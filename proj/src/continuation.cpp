#include "bingham/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bingham/diagnostics.hpp"
#include "bingham/operators.hpp"

namespace bingham {

void MSchedule::validate() const {
  if (values.empty()) throw std::invalid_argument("m schedule is empty");
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!(values[k] >= 2.0) || !std::isfinite(values[k])) {
      throw std::invalid_argument("m schedule values must satisfy m >= 2");
    }
    if (k > 0 && !(values[k] > values[k - 1])) {
      throw std::invalid_argument("m schedule must be strictly increasing");
    }
  }
}

std::vector<YieldState> classify_yield(const TensorField& d, const FluidParams& p,
                                       const RegIndex& r) {
  const double gm = gamma_m(p, r);
  std::vector<YieldState> out;
  out.reserve(d.values().size());
  for (const SymTensor2& a : d.values()) {
    out.push_back(tensor_norm(a) > gm ? YieldState::Yielded : YieldState::Unyielded);
  }
  return out;
}

double detect_plug_half_width(const StaggeredField& f, const Scenario& s, const FluidParams& p,
                              const RegIndex& r) {
  const Grid& g = s.grid;
  const TensorField d = compute_strain(f, g);
  const std::vector<YieldState> y = classify_yield(d, p, r);
  const int i = g.nx() / 2;
  auto unyielded = [&](int j) {
    return y[static_cast<std::size_t>(j) * g.nx() + i] == YieldState::Unyielded;
  };
  // Centerline cell(s): the one(s) whose center is closest to y = ly / 2.
  const double yc = s.centerline();
  int j_hi = std::clamp(static_cast<int>(std::floor(yc / g.dy())), 0, g.ny() - 1);
  int j_lo = (g.ny() % 2 == 0) ? j_hi - 1 : j_hi;
  if (j_lo < 0 || !unyielded(j_lo) || !unyielded(j_hi)) return 0.0;
  while (j_lo - 1 >= 0 && unyielded(j_lo - 1)) --j_lo;
  while (j_hi + 1 < g.ny() && unyielded(j_hi + 1)) ++j_hi;
  // Band [j_lo, j_hi] spans (j_hi - j_lo + 1) cells; report half of it.
  return 0.5 * (j_hi - j_lo + 1) * g.dy();
}

double channel_profile_error(const StaggeredField& f, const Scenario& s, const FluidParams& p,
                             const RegIndex& r) {
  const Grid& g = s.grid;
  const int i = g.nx() / 2;
  double num = 0.0, den = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    const double y = g.y_center(j) - s.centerline();
    const double exact = channel_oracle(y, s.force_gx, s.half_width(), p, r);
    const double diff = f.u(i, j) - exact;
    num += diff * diff;
    den += exact * exact;
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

SweepError::SweepError(double m, const std::string& what)
    : SolverError([&] {
        std::ostringstream os;
        os << "m = " << m << ": " << what;
        return os.str();
      }()),
      m_(m) {}

bool LimitReport::deltas_nonincreasing() const {
  for (std::size_t k = 2; k < entries.size(); ++k) {
    if (entries[k].delta_H > entries[k - 1].delta_H * (1.0 + kRoundingSlack)) return false;
  }
  return true;
}

bool LimitReport::stress_bound_holds() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const LimitEntry& e) { return e.bound_violations == 0; });
}

bool LimitReport::plastic_branch_exact() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const LimitEntry& e) { return e.yielded_deviation == 0.0; });
}

bool LimitReport::plug_monotone() const {
  if (scenario != ScenarioKind::Channel) return true;
  for (std::size_t k = 1; k < entries.size(); ++k) {
    if (entries[k].plug_half_width > entries[k - 1].plug_half_width) return false;
  }
  return true;
}

bool LimitReport::plug_within_cell() const {
  if (scenario != ScenarioKind::Channel) return true;
  return std::all_of(entries.begin(), entries.end(), [&](const LimitEntry& e) {
    return std::abs(e.plug_half_width - e.oracle_plug_half_width) <= cell_size;
  });
}

bool LimitReport::all_steady() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const LimitEntry& e) { return e.reached_steady; });
}

namespace {

template <class F>
double spread(const std::vector<LimitEntry>& entries, F get) {
  if (entries.empty()) return 0.0;
  double lo = get(entries.front()), hi = lo;
  for (const LimitEntry& e : entries) {
    lo = std::min(lo, get(e));
    hi = std::max(hi, get(e));
  }
  return hi > 0.0 ? (hi - lo) / hi : 0.0;
}

}  // namespace

double LimitReport::sup_H_spread() const {
  return spread(entries, [](const LimitEntry& e) { return e.sup_H; });
}

double LimitReport::int_V2_spread() const {
  return spread(entries, [](const LimitEntry& e) { return e.int_V2; });
}

std::map<std::string, bool> LimitReport::assertions() const {
  return {{"sweep_all_steady", all_steady()},
          {"sweep_deltas_nonincreasing", deltas_nonincreasing()},
          {"sweep_unyielded_stress_bound", stress_bound_holds()},
          {"sweep_plastic_branch_exact", plastic_branch_exact()},
          {"sweep_plug_monotone", plug_monotone()},
          {"sweep_plug_within_one_cell", plug_within_cell()}};
}

LimitReport run_m_sweep(const Scenario& s, const FluidParams& p, const MSchedule& schedule,
                        const SolveConfig& cfg, double epsilon_yield) {
  schedule.validate();
  s.validate();
  LimitReport rep;
  rep.scenario = s.kind;
  rep.warm_start = schedule.warm_start;
  rep.epsilon_yield = epsilon_yield;
  rep.cell_size = s.grid.dy();
  if (s.kind == ScenarioKind::Channel) rep.bingham_plug_half_width = bingham_plug_half_width(s.force_gx, p);

  const Grid& g = s.grid;
  const double shear_eps = epsilon_yield * s.characteristic_shear(p);
  StaggeredField seed = s.initial_state();
  for (double m : schedule.values) {
    LimitEntry e;
    e.m = m;
    try {
      SolveConfig c = cfg;
      c.m = RegIndex(m);
      const FlowSolver solver(g, s.boundary, p, c, s.forcing());
      const StaggeredField init = schedule.warm_start ? seed : s.initial_state();
      RunResult run = solver.run_to_steady(init, {});
      e.state = run.state;
      e.steps = run.steps;
      e.reached_steady = run.reached_steady;
      e.max_divergence = run.report.scalars["max_divergence"];
      for (double k : run.report.series["picard_iterations"]) e.total_picard += static_cast<int>(k);
      const auto& t = run.report.series["t"];
      const auto& nh = run.report.series["norm_H"];
      std::vector<double> v2;
      for (double v : run.report.series["norm_V"]) v2.push_back(v * v);
      e.sup_H = *std::max_element(nh.begin(), nh.end());
      e.int_V2 = trapezoid(t, v2);
    } catch (const std::exception& ex) {
      throw SweepError(m, ex.what());
    }

    const RegIndex r(m);
    const TensorField d = compute_strain(e.state, g);
    const std::vector<YieldState> cls = classify_yield(d, p, r);
    e.stress_bound = newtonian_branch_stress_bound(p, r);
    long yielded = 0, fixed_unyielded = 0;
    for (std::size_t k = 0; k < cls.size(); ++k) {
      const SymTensor2& a = d.values()[k];
      const SymTensor2 tau = biviscosity_stress(a, p, r);
      if (tensor_norm(a) <= shear_eps) ++fixed_unyielded;
      if (cls[k] == YieldState::Yielded) {
        ++yielded;
        const StressResult b = bingham_stress(a, p);
        const SymTensor2 dev = tau - *b.stress;
        e.yielded_deviation = std::max(e.yielded_deviation, tensor_norm(dev));
      } else {
        const double tn = tensor_norm(tau);
        e.max_unyielded_stress = std::max(e.max_unyielded_stress, tn);
        if (tn > e.stress_bound * (1.0 + kRoundingSlack)) ++e.bound_violations;
      }
    }
    e.yielded_fraction = static_cast<double>(yielded) / static_cast<double>(cls.size());
    e.fixed_threshold_unyielded_fraction =
        static_cast<double>(fixed_unyielded) / static_cast<double>(cls.size());
    if (s.kind == ScenarioKind::Channel) {
      e.plug_half_width = detect_plug_half_width(e.state, s, p, r);
      e.oracle_plug_half_width = channel_plug_half_width(s.force_gx, s.half_width(), p, r);
      e.profile_error = channel_profile_error(e.state, s, p, r);
    }
    if (!rep.entries.empty()) {
      e.delta_H = norm_H(velocity_difference(e.state, rep.entries.back().state, g), g);
    }
    seed = e.state;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

}  // namespace bingham
