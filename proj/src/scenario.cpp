#include "bingham/scenario.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bingham/operators.hpp"

namespace bingham {

namespace {

void check_channel_args(double y, double g_force, double half_width) {
  if (!(g_force > 0.0)) throw std::invalid_argument("channel oracle needs G > 0");
  if (!(half_width > 0.0)) throw std::invalid_argument("channel oracle needs H > 0");
  if (!(std::abs(y) <= half_width)) {
    throw std::invalid_argument("channel oracle needs |y| <= H");
  }
}

}  // namespace

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Channel: return "channel";
    case ScenarioKind::Cavity: return "cavity";
    case ScenarioKind::Decay: return "decay";
  }
  return "unknown";
}

ScenarioKind scenario_kind_from_string(const std::string& name) {
  if (name == "channel") return ScenarioKind::Channel;
  if (name == "cavity") return ScenarioKind::Cavity;
  if (name == "decay") return ScenarioKind::Decay;
  throw std::invalid_argument("unknown scenario '" + name + "' (channel, cavity, decay)");
}

Scenario Scenario::channel(int nx, int ny, double lx, double half_width, double g_force) {
  Scenario s;
  s.kind = ScenarioKind::Channel;
  s.grid = Grid(nx, ny, lx, 2.0 * half_width);
  s.boundary = BoundarySpec::periodic_channel();
  s.force_gx = g_force;
  s.validate();
  return s;
}

Scenario Scenario::cavity(int nx, int ny, double length, double lid) {
  Scenario s;
  s.kind = ScenarioKind::Cavity;
  s.grid = Grid(nx, ny, length, length);
  s.boundary = BoundarySpec::lid_driven(lid);
  s.lid_speed = lid;
  s.validate();
  return s;
}

Scenario Scenario::decay(int nx, int ny, double length, double amplitude, std::uint64_t seed) {
  Scenario s;
  s.kind = ScenarioKind::Decay;
  s.grid = Grid(nx, ny, length, length);
  s.boundary = BoundarySpec::no_slip_box();
  s.init_amplitude = amplitude;
  s.seed = seed;
  s.validate();
  return s;
}

void Scenario::validate() const {
  boundary.validate();
  switch (kind) {
    case ScenarioKind::Channel:
      if (!boundary.periodic_x()) throw std::invalid_argument("channel needs periodic x walls");
      if (!(force_gx > 0.0)) throw std::invalid_argument("channel needs force_gx > 0");
      break;
    case ScenarioKind::Cavity:
      if (boundary.periodic_x()) throw std::invalid_argument("cavity must be a closed box");
      if (!std::isfinite(lid_speed) || lid_speed == 0.0) {
        throw std::invalid_argument("cavity needs a nonzero finite lid_speed");
      }
      break;
    case ScenarioKind::Decay:
      if (boundary.periodic_x() || boundary.lid_speed() != 0.0) {
        throw std::invalid_argument("decay runs in a closed box at rest");
      }
      if (!(init_amplitude > 0.0)) throw std::invalid_argument("decay needs init_amplitude > 0");
      break;
  }
}

Forcing Scenario::forcing() const {
  return kind == ScenarioKind::Channel ? Forcing::constant(force_gx, 0.0) : Forcing::none();
}

StaggeredField Scenario::initial_state() const {
  if (kind == ScenarioKind::Decay) {
    return random_solenoidal_field(grid, boundary, seed, init_amplitude);
  }
  StaggeredField f(grid);
  apply_bcs(f, grid, boundary);
  return f;
}

double Scenario::characteristic_shear(const FluidParams& p) const {
  switch (kind) {
    case ScenarioKind::Channel: return force_gx * half_width() / p.mu();
    case ScenarioKind::Cavity: return std::abs(lid_speed) / grid.lx();
    case ScenarioKind::Decay: return init_amplitude / (grid.lx() * grid.ly());
  }
  return 1.0;
}

double channel_plug_half_width(double g_force, double half_width, const FluidParams& p,
                               const RegIndex& r) {
  const double yc = r.m() / (r.m() - 1.0) * p.tau_y() / (std::numbers::sqrt2 * g_force);
  return std::min(yc, half_width);
}

double bingham_plug_half_width(double g_force, const FluidParams& p) {
  return p.tau_y() / (std::numbers::sqrt2 * g_force);
}

double channel_oracle(double y, double g_force, double half_width, const FluidParams& p,
                      const RegIndex& r) {
  check_channel_args(y, g_force, half_width);
  // Shear stress -G y; plastic branch mu u' - tau_y/sqrt2 = -G y for y > 0,
  // Newtonian branch m mu u' = -G y inside |y| <= yc.
  const double s = std::abs(y);
  const double h = half_width;
  const double mu = p.mu();
  const double k = p.tau_y() / std::numbers::sqrt2;
  const double yc = channel_plug_half_width(g_force, h, p, r);
  auto plastic = [&](double a) { return (0.5 * g_force * (h * h - a * a) - k * (h - a)) / mu; };
  if (s >= yc) return plastic(s);
  return plastic(yc) + g_force * (yc * yc - s * s) / (2.0 * r.m() * mu);
}

double channel_oracle_quadrature(double y, double g_force, double half_width,
                                 const FluidParams& p, const RegIndex& r) {
  check_channel_args(y, g_force, half_width);
  // Shear rate g >= 0 at distance s: g eta(|D|) = G s with |D| = g / sqrt 2.
  auto shear_rate = [&](double s) {
    const double target = g_force * s;
    if (target <= 0.0) return 0.0;
    auto f = [&](double g) {
      return g * effective_viscosity(g / std::numbers::sqrt2, p, r) - target;
    };
    // Bracket on the branch that holds the root so f is smooth inside it.
    const double g_kink = std::numbers::sqrt2 * gamma_m(p, r);
    const double f_kink = f(g_kink);
    const double a = f_kink >= 0.0 ? 0.0 : g_kink;
    const double b = f_kink >= 0.0 ? g_kink : target / p.mu();
    if (f_kink == 0.0) return g_kink;
    std::uintmax_t iters = 200;
    const auto [lo, hi] = boost::math::tools::toms748_solve(
        f, a, b, f(a), f(b), boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (lo + hi);
  };
  const double s = std::abs(y);
  if (s >= half_width) return 0.0;
  // The shear rate has a kink where |D| = gamma_m; integrate each smooth piece separately.
  const double kink = std::numbers::sqrt2 * gamma_m(p, r) * r.m() * p.mu() / g_force;
  auto integrate = [&](double a, double b) {
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(shear_rate, a, b, 10,
                                                                         1e-13, &err);
  };
  if (kink > s && kink < half_width) return integrate(s, kink) + integrate(kink, half_width);
  return integrate(s, half_width);
}

}  // namespace bingham
