/// @file solver.hpp
/// @brief Projection-method time stepping for the regularized Bingham flow.
///
/// One step: explicit flux-form advection, body force together with the
/// previous pressure gradient, implicit variable-viscosity diffusion by
/// Picard iteration, then a pressure projection that adds the increment to
/// p. Density is normalized to 1.
#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bingham/constitutive.hpp"
#include "bingham/grid.hpp"
#include "bingham/kernels.hpp"
#include "bingham/linear_solvers.hpp"
#include "bingham/report.hpp"

namespace bingham {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CflError : public SolverError {
 public:
  CflError(double cfl, double limit);
  double cfl() const { return cfl_; }

 private:
  double cfl_;
};

struct SolveConfig {
  std::optional<double> dt;   ///< fixed time step; exclusive with cfl
  std::optional<double> cfl;  ///< target Courant number
  double t_end = 1.0;
  RegIndex m{2.0};
  double picard_tol = 1e-8;
  int picard_max = 1000;
  double poisson_tol = 1e-10;
  double steady_tol = 1e-6;

  /// Throws std::invalid_argument on the first violated invariant.
  void validate() const;
};

/// Body force per unit mass, evaluated pointwise at face positions.
class Forcing {
 public:
  using Fn = std::function<double(double x, double y, double t)>;

  Forcing() = default;
  Forcing(Fn fx, Fn fy) : fx_(std::move(fx)), fy_(std::move(fy)) {}

  static Forcing none() { return {}; }
  static Forcing constant(double gx, double gy);

  bool is_zero() const { return !fx_ && !fy_; }
  double fx(double x, double y, double t) const { return fx_ ? fx_(x, y, t) : 0.0; }
  double fy(double x, double y, double t) const { return fy_ ? fy_(x, y, t) : 0.0; }

  /// Force sampled on every face (walls included) at time t.
  FaceVec sample(const Grid& g, double t) const;

 private:
  Fn fx_;
  Fn fy_;
};

/// Viscosity frozen from a velocity state: cell centers (normal stresses)
/// and corners (shear). A corner's strain norm combines its own shear with
/// the normal strain averaged over the adjacent cells.
struct ViscosityField {
  CellField cell;
  Array2D corner;
};

struct DiffuseResult {
  StaggeredField field;
  int picard_iterations = 0;
  int linear_iterations = 0;
};

struct ProjectResult {
  StaggeredField field;
  int iterations = 0;
  double max_divergence = 0.0;
};

struct StepStats {
  double dt = 0.0;
  double cfl = 0.0;
  int picard_iterations = 0;
  int linear_iterations = 0;
  int poisson_iterations = 0;
  double max_divergence = 0.0;
};

struct StepResult {
  StaggeredField state;
  StepStats stats;
};

struct Snapshot {
  double t = 0.0;
  StaggeredField state;
};
using History = std::vector<Snapshot>;

struct RunOptions {
  bool record_history = false;
  int record_every = 1;        ///< history stride in steps
  bool project_initial = true; ///< project the initial datum once
  std::function<void(const Snapshot&, const StepStats&)> on_step;
};

struct RunResult {
  StaggeredField state;
  double t = 0.0;
  int steps = 0;
  bool reached_steady = false;
  double final_change = 0.0;  ///< ||u^{n+1} - u^n||_H / dt at the last step
  History history;
  RunReport report;
};

class FlowSolver {
 public:
  FlowSolver(Grid grid, BoundarySpec bc, FluidParams params, SolveConfig cfg,
             Forcing forcing = Forcing::none());

  const Grid& grid() const { return grid_; }
  const BoundarySpec& boundary() const { return bc_; }
  const FluidParams& params() const { return params_; }
  const SolveConfig& config() const { return cfg_; }
  const Forcing& forcing() const { return forcing_; }
  const RegIndex& reg() const { return cfg_.m; }

  /// Courant number max(|u| dt/dx, |v| dt/dy) over all faces and the lid.
  double courant(const StaggeredField& f, double dt) const;
  /// Step size: the fixed dt, or cfl * min(dx, dy) / max(|u|, |lid|, tiny).
  double time_step(const StaggeredField& f) const;

  StaggeredField advect(const StaggeredField& f, double dt) const;
  DiffuseResult diffuse_implicit(const StaggeredField& f, double dt) const;
  ProjectResult pressure_project(const StaggeredField& f, double dt) const;
  /// One step from time t; dt defaults to time_step(f).
  StepResult step(const StaggeredField& f, double t, std::optional<double> dt = {}) const;
  RunResult run_to_steady(const StaggeredField& init, const RunOptions& opts = {}) const;

  ViscosityField viscosity(const StaggeredField& f) const;

  /// sum tau_m(Du):Dw with the scheme's quadrature; viscosity frozen in eta.
  /// Both fields must carry ghosts for their own boundary data.
  double viscous_form(const StaggeredField& u, const StaggeredField& w,
                      const ViscosityField& eta) const;
  /// Same quadrature with eta replaced by mu (the coercive floor).
  double newtonian_form(const StaggeredField& u, const StaggeredField& w) const;
  /// viscous_form(u, u, viscosity(u)).
  double dissipation_rate(const StaggeredField& f) const;

  /// <(u.grad)u, w> summed over the unknown faces, weighted by cell area.
  double advection_pairing(const StaggeredField& u, const StaggeredField& w) const;
  /// <f(t), w> over all faces with the H-norm weights.
  double forcing_pairing(const StaggeredField& w, double t) const;

  /// Project an arbitrary initial velocity onto the discretely solenoidal set.
  StaggeredField prepare_initial(const StaggeredField& init) const;

 private:
  /// out = x + dt * A(eta) x; x must already carry its ghosts.
  void apply_viscous(const FaceVec& x, const ViscosityField& eta, double dt,
                     kernels::ViscousWork& work, FaceVec& out) const;
  FaceVec viscous_diagonal(const ViscosityField& eta, double dt) const;

  Grid grid_;
  BoundarySpec bc_;
  FluidParams params_;
  SolveConfig cfg_;
  Forcing forcing_;
  FaceRanges ranges_;
};

}  // namespace bingham
