/// @file scenario.hpp
/// @brief Benchmark flow set-ups and the analytic channel profile.
///
/// Channel: plates at y = 0 and y = ly = 2 H, periodic in x, driven by a
/// uniform body force G along x. Cavity: closed box with the top lid moving
/// at speed U. Decay: closed box, no forcing, random solenoidal start.
#pragma once

#include <cstdint>
#include <string>

#include "bingham/constitutive.hpp"
#include "bingham/grid.hpp"
#include "bingham/solver.hpp"

namespace bingham {

enum class ScenarioKind { Channel, Cavity, Decay };

std::string to_string(ScenarioKind k);
/// Throws std::invalid_argument for an unknown name.
ScenarioKind scenario_kind_from_string(const std::string& name);

struct Scenario {
  ScenarioKind kind = ScenarioKind::Channel;
  Grid grid{16, 64, 1.0, 2.0};
  BoundarySpec boundary = BoundarySpec::periodic_channel();
  double force_gx = 0.0;        ///< channel body force G
  double lid_speed = 0.0;       ///< cavity lid speed U
  double init_amplitude = 0.0;  ///< decay: H-norm of the initial field
  std::uint64_t seed = 0;       ///< decay: initial field seed

  static Scenario channel(int nx, int ny, double lx, double half_width, double g_force);
  static Scenario cavity(int nx, int ny, double length, double lid);
  static Scenario decay(int nx, int ny, double length, double amplitude, std::uint64_t seed);

  Forcing forcing() const;
  /// Rest for channel and cavity, the seeded random solenoidal field for decay.
  StaggeredField initial_state() const;
  double half_width() const { return 0.5 * grid.ly(); }
  double centerline() const { return 0.5 * grid.ly(); }
  /// Shear scale used for fixed-threshold yield classification.
  double characteristic_shear(const FluidParams& p) const;

  void validate() const;
};

/// Steady bi-viscosity channel velocity at signed distance y from the
/// centerline, plates at +-half_width, body force g_force > 0.
double channel_oracle(double y, double g_force, double half_width, const FluidParams& p,
                      const RegIndex& r);

/// Same profile computed independently: the shear rate is found pointwise by
/// root finding on the scalar flow curve and integrated from the wall by
/// adaptive Gauss-Kronrod quadrature.
double channel_oracle_quadrature(double y, double g_force, double half_width,
                                 const FluidParams& p, const RegIndex& r);

/// Half-width of the Newtonian-branch core, min(H, m/(m-1) tau_y / (sqrt 2 G)).
/// With |A|^2 = A:A the wall-normal shear stress at yield is tau_y / sqrt 2.
double channel_plug_half_width(double g_force, double half_width, const FluidParams& p,
                               const RegIndex& r);
/// m -> infinity limit, tau_y / (sqrt 2 G).
double bingham_plug_half_width(double g_force, const FluidParams& p);

}  // namespace bingham
