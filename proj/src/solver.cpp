#include "bingham/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "bingham/operators.hpp"

namespace bingham {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

/// Zero every entry that is not a velocity unknown (ghosts and wall faces).
void mask_unknowns(FaceVec& x, const Grid& g, const FaceRanges& r) {
  for (int j = -1; j <= g.ny(); ++j) {
    for (int i = -1; i <= g.nx() + 1; ++i) {
      if (j < 0 || j >= g.ny() || i < r.u_i0 || i >= r.u_i1) x.u(i, j) = 0.0;
    }
  }
  for (int j = -1; j <= g.ny() + 1; ++j) {
    for (int i = -1; i <= g.nx(); ++i) {
      if (i < 0 || i >= g.nx() || j < r.v_j0 || j >= r.v_j1) x.v(i, j) = 0.0;
    }
  }
}

double cell_mean(const CellField& a, const Grid& g) {
  double s = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) s += a(i, j);
  }
  return s / (static_cast<double>(g.nx()) * g.ny());
}

void subtract_mean(CellField& a, const Grid& g) {
  const double m = cell_mean(a, g);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) a(i, j) -= m;
  }
}

double max_abs_cells(const CellField& a, const Grid& g) {
  double m = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) m = std::max(m, std::abs(a(i, j)));
  }
  return m;
}

}  // namespace

CflError::CflError(double cfl, double limit)
    : SolverError("CFL number " + fmt(cfl) + " exceeds the explicit advection limit " +
                  fmt(limit)),
      cfl_(cfl) {}

void SolveConfig::validate() const {
  if (dt.has_value() == cfl.has_value()) {
    throw std::invalid_argument("exactly one of dt and cfl must drive the time step");
  }
  if (dt && !(*dt > 0.0 && std::isfinite(*dt))) throw std::invalid_argument("dt must be > 0");
  if (cfl && !(*cfl > 0.0 && *cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0, 1]");
  if (!(t_end > 0.0 && std::isfinite(t_end))) throw std::invalid_argument("t_end must be > 0");
  if (!(picard_tol > 0.0)) throw std::invalid_argument("picard_tol must be > 0");
  if (picard_max < 1) throw std::invalid_argument("picard_max must be >= 1");
  if (!(poisson_tol > 0.0)) throw std::invalid_argument("poisson_tol must be > 0");
  if (!(steady_tol > 0.0)) throw std::invalid_argument("steady_tol must be > 0");
}

Forcing Forcing::constant(double gx, double gy) {
  if (!std::isfinite(gx) || !std::isfinite(gy)) {
    throw std::invalid_argument("forcing must be finite");
  }
  if (gx == 0.0 && gy == 0.0) return none();
  return Forcing([gx](double, double, double) { return gx; },
                 [gy](double, double, double) { return gy; });
}

FaceVec Forcing::sample(const Grid& g, double t) const {
  FaceVec f(g);
  if (is_zero()) return f;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i <= g.nx(); ++i) f.u(i, j) = fx(g.x_face(i), g.y_center(j), t);
  }
  for (int j = 0; j <= g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) f.v(i, j) = fy(g.x_center(i), g.y_face(j), t);
  }
  return f;
}

FlowSolver::FlowSolver(Grid grid, BoundarySpec bc, FluidParams params, SolveConfig cfg,
                       Forcing forcing)
    : grid_(grid), bc_(bc), params_(params), cfg_(cfg), forcing_(std::move(forcing)),
      ranges_(unknown_faces(grid, bc)) {
  bc_.validate();
  cfg_.validate();
}

double FlowSolver::courant(const StaggeredField& f, double dt) const {
  // The lid enters the advective fluxes through the top ghost row.
  double umax = std::abs(bc_.lid_speed()), vmax = 0.0;
  for (int j = 0; j < grid_.ny(); ++j) {
    for (int i = 0; i <= grid_.nx(); ++i) umax = std::max(umax, std::abs(f.u(i, j)));
  }
  for (int j = 0; j <= grid_.ny(); ++j) {
    for (int i = 0; i < grid_.nx(); ++i) vmax = std::max(vmax, std::abs(f.v(i, j)));
  }
  return std::max(umax * dt / grid_.dx(), vmax * dt / grid_.dy());
}

double FlowSolver::time_step(const StaggeredField& f) const {
  if (cfg_.dt) return *cfg_.dt;
  double scale = std::abs(bc_.lid_speed());
  for (int j = 0; j < grid_.ny(); ++j) {
    for (int i = 0; i <= grid_.nx(); ++i) scale = std::max(scale, std::abs(f.u(i, j)));
  }
  for (int j = 0; j <= grid_.ny(); ++j) {
    for (int i = 0; i < grid_.nx(); ++i) scale = std::max(scale, std::abs(f.v(i, j)));
  }
  // A resting state gives no velocity scale; cap the step relative to t_end.
  const double cap = cfg_.t_end / 50.0;
  if (scale <= 0.0) return cap;
  return std::min(cap, *cfg_.cfl * std::min(grid_.dx(), grid_.dy()) / scale);
}

StaggeredField FlowSolver::advect(const StaggeredField& f, double dt) const {
  require_matches(f, grid_, "advect");
  StaggeredField in = f;
  apply_bcs(in, grid_, bc_);
  const double c = courant(in, dt);
  if (c > 1.0) throw CflError(c, 1.0);
  FaceVec n(grid_);
  kernels::parallel::advection(in.u, in.v, grid_, ranges_, n.u, n.v);
  axpy(-dt, n.u, in.u);
  axpy(-dt, n.v, in.v);
  apply_bcs(in, grid_, bc_);
  return in;
}

ViscosityField FlowSolver::viscosity(const StaggeredField& f) const {
  const TensorField d = compute_strain(f, grid_);
  const int nx = grid_.nx(), ny = grid_.ny();
  ViscosityField eta{CellField(nx, ny), kernels::make_corner_array(grid_)};
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      eta.cell(i, j) = effective_viscosity(tensor_norm(d(i, j)), params_, cfg_.m);
    }
  }
  // Corners use their own shear plus the normal strain averaged over the
  // adjacent cells, so the shear stress at a corner follows the law pointwise.
  Array2D dxy = kernels::make_corner_array(grid_);
  kernels::parallel::corner_shear(f.u, f.v, grid_, dxy);
  const bool periodic = bc_.periodic_x();
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      double normal2 = 0.0;
      int count = 0;
      for (int dj = -1; dj <= 0; ++dj) {
        const int cj = j + dj;
        if (cj < 0 || cj >= ny) continue;
        for (int di = -1; di <= 0; ++di) {
          int ci = i + di;
          if (periodic) {
            ci = (ci + nx) % nx;
          } else if (ci < 0 || ci >= nx) {
            continue;
          }
          const SymTensor2& c = d(ci, cj);
          normal2 += c.xx * c.xx + c.yy * c.yy;
          ++count;
        }
      }
      const double norm = std::sqrt(normal2 / count + 2.0 * dxy(i, j) * dxy(i, j));
      eta.corner(i, j) = effective_viscosity(norm, params_, cfg_.m);
    }
  }
  return eta;
}

void FlowSolver::apply_viscous(const FaceVec& x, const ViscosityField& eta, double dt,
                               kernels::ViscousWork& work, FaceVec& out) const {
  kernels::parallel::viscous_apply(x.u, x.v, eta.cell, eta.corner, grid_, ranges_,
                                   bc_.periodic_x(), work, out.u, out.v);
  xpby(x, dt, out);
}

FaceVec FlowSolver::viscous_diagonal(const ViscosityField& eta, double dt) const {
  const int nx = grid_.nx(), ny = grid_.ny();
  const double idx2 = 1.0 / (grid_.dx() * grid_.dx());
  const double idy2 = 1.0 / (grid_.dy() * grid_.dy());
  const bool periodic = bc_.periodic_x();
  FaceVec d(grid_);
  for (int j = 0; j < ny; ++j) {
    const double cb = j == 0 ? 2.0 : 1.0;
    const double ct = j == ny - 1 ? 2.0 : 1.0;
    for (int i = ranges_.u_i0; i < ranges_.u_i1; ++i) {
      const double west = i > 0 ? eta.cell(i - 1, j) : eta.cell(nx - 1, j);
      const double east = eta.cell(i, j);
      d.u(i, j) = 1.0 + dt * (2.0 * (east + west) * idx2 +
                              (ct * eta.corner(i, j + 1) + cb * eta.corner(i, j)) * idy2);
    }
  }
  for (int j = ranges_.v_j0; j < ranges_.v_j1; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double cl = (!periodic && i == 0) ? 2.0 : 1.0;
      const double cr = (!periodic && i == nx - 1) ? 2.0 : 1.0;
      d.v(i, j) = 1.0 + dt * (2.0 * (eta.cell(i, j) + eta.cell(i, j - 1)) * idy2 +
                              (cr * eta.corner(i + 1, j) + cl * eta.corner(i, j)) * idx2);
    }
  }
  return d;
}

DiffuseResult FlowSolver::diffuse_implicit(const StaggeredField& f, double dt) const {
  require_matches(f, grid_, "diffuse_implicit");
  if (!(dt > 0.0)) throw std::invalid_argument("diffuse_implicit: dt must be > 0");
  const BoundarySpec hom = bc_.homogeneous();

  StaggeredField cur = f;
  apply_bcs(cur, grid_, bc_);
  FaceVec rhs{cur.u, cur.v};
  mask_unknowns(rhs, grid_, ranges_);

  auto dot = [&](const FaceVec& a, const FaceVec& b) {
    return kernels::parallel::dot_faces(a.u, a.v, b.u, b.v, grid_, ranges_);
  };
  const double rhs_norm = std::sqrt(dot(rhs, rhs));
  const double lin_tol = std::min(1e-10, 0.01 * cfg_.picard_tol);
  const int lin_max = 20 * (grid_.nx() + grid_.ny()) + 200;

  kernels::ViscousWork work;
  work.ensure(grid_);
  ViscosityField eta = viscosity(cur);
  DiffuseResult res;
  double update = 0.0;
  for (int k = 1; k <= cfg_.picard_max; ++k) {
    FaceVec x{cur.u, cur.v};
    FaceVec ax(grid_);
    apply_viscous(x, eta, dt, work, ax);
    FaceVec r = rhs;
    axpy(-1.0, ax, r);
    mask_unknowns(r, grid_, ranges_);

    const FaceVec diag = viscous_diagonal(eta, dt);
    auto apply = [&](FaceVec& p, FaceVec& out) {
      apply_velocity_bcs(p.u, p.v, grid_, hom);
      apply_viscous(p, eta, dt, work, out);
    };
    auto precond = [&](const FaceVec& rr, FaceVec& z) {
      z.u.fill(0.0);
      z.v.fill(0.0);
      for (int j = 0; j < grid_.ny(); ++j) {
        for (int i = ranges_.u_i0; i < ranges_.u_i1; ++i) z.u(i, j) = rr.u(i, j) / diag.u(i, j);
      }
      for (int j = ranges_.v_j0; j < ranges_.v_j1; ++j) {
        for (int i = 0; i < grid_.nx(); ++i) z.v(i, j) = rr.v(i, j) / diag.v(i, j);
      }
    };
    auto metric = [&](const FaceVec& rr) { return std::sqrt(dot(rr, rr)); };

    FaceVec delta(grid_);
    // Inexact corrections: a fixed fraction of the current residual, floored
    // relative to the data so the last sweeps are solved tightly. A constant
    // viscosity makes the problem linear, so it is solved tightly at once.
    const double r_norm = metric(r);
    const double tight = lin_tol * std::max(rhs_norm, r_norm);
    const double cg_tol = params_.tau_y() == 0.0 ? tight : std::max(tight, 1e-3 * r_norm);
    const CgResult cg = pcg(apply, precond, dot, metric, r, delta, cg_tol, lin_max);
    if (!cg.converged) {
      throw LinearSolveError("viscous solve did not converge in " + std::to_string(lin_max) +
                             " iterations (residual " + fmt(cg.residual) + ")");
    }
    res.linear_iterations += cg.iterations;

    mask_unknowns(delta, grid_, ranges_);
    axpy(1.0, delta.u, cur.u);
    axpy(1.0, delta.v, cur.v);
    apply_bcs(cur, grid_, bc_);

    FaceVec xs{cur.u, cur.v};
    mask_unknowns(xs, grid_, ranges_);
    update = std::sqrt(dot(delta, delta));
    const double scale = std::sqrt(dot(xs, xs));

    ViscosityField next = viscosity(cur);
    const bool frozen = next.cell == eta.cell && next.corner == eta.corner;
    // A frozen viscosity only ends the loop once the linear solve was tight.
    if ((frozen && cg_tol <= tight) || update <= cfg_.picard_tol * scale) {
      res.picard_iterations = k;
      res.field = std::move(cur);
      return res;
    }
    eta = std::move(next);
  }
  throw SolverError("Picard iteration did not converge after " +
                    std::to_string(cfg_.picard_max) + " iterations (last update " +
                    fmt(update) + ")");
}

ProjectResult FlowSolver::pressure_project(const StaggeredField& f, double dt) const {
  require_matches(f, grid_, "pressure_project");
  if (!(dt > 0.0)) throw std::invalid_argument("pressure_project: dt must be > 0");
  const int nx = grid_.nx(), ny = grid_.ny();
  const bool periodic = bc_.periodic_x();

  StaggeredField out = f;
  apply_bcs(out, grid_, bc_);
  CellField div(nx, ny);
  kernels::parallel::divergence(out.u, out.v, grid_, div);

  // Solve -L phi = -div/dt; -L is SPD on zero-mean fields.
  CellField b(nx, ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) b(i, j) = -div(i, j) / dt;
  }
  subtract_mean(b, grid_);
  const double bmax = max_abs_cells(b, grid_);

  CellField diag(nx, ny);
  const double idx2 = 1.0 / (grid_.dx() * grid_.dx());
  const double idy2 = 1.0 / (grid_.dy() * grid_.dy());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int nbx = periodic ? 2 : (i > 0) + (i + 1 < nx);
      const int nby = (j > 0) + (j + 1 < ny);
      diag(i, j) = nbx * idx2 + nby * idy2;
    }
  }

  auto apply = [&](CellField& p, CellField& o) {
    kernels::parallel::laplacian(p, grid_, periodic, o);
    for (double& x : o.raw()) x = -x;
  };
  auto precond = [&](const CellField& r, CellField& z) {
    z.fill(0.0);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) z(i, j) = r(i, j) / diag(i, j);
    }
    subtract_mean(z, grid_);
  };
  auto dot = [&](const CellField& a, const CellField& c) {
    return kernels::parallel::dot_cells(a, c, grid_);
  };
  auto metric = [&](const CellField& r) { return max_abs_cells(r, grid_); };

  // The divergence left behind is dt times the residual; bound it by
  // poisson_tol relative to the incoming divergence, and absolutely.
  const double tol = cfg_.poisson_tol * std::min(bmax, 1.0 / dt);
  CellField phi(nx, ny);
  const int max_iter = 10 * nx * ny + 100;
  const CgResult cg = pcg(apply, precond, dot, metric, b, phi, tol, max_iter);
  if (!cg.converged) {
    throw SolverError("pressure Poisson solve did not converge in " + std::to_string(max_iter) +
                      " iterations (residual " + fmt(cg.residual) + ")");
  }
  subtract_mean(phi, grid_);

  FaceVec grad(grid_);
  pressure_gradient(phi, grid_, bc_, grad.u, grad.v);
  axpy(-dt, grad.u, out.u);
  axpy(-dt, grad.v, out.v);
  apply_bcs(out, grid_, bc_);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) out.p(i, j) += phi(i, j);
  }
  subtract_mean(out.p, grid_);

  ProjectResult res;
  res.iterations = cg.iterations;
  res.max_divergence = max_abs_divergence(out, grid_);
  res.field = std::move(out);
  return res;
}

StepResult FlowSolver::step(const StaggeredField& f, double t, std::optional<double> dt) const {
  require_matches(f, grid_, "step");
  StepStats st;
  st.dt = dt ? *dt : std::min(time_step(f), cfg_.t_end);
  if (!(st.dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
  st.cfl = courant(f, st.dt);
  StaggeredField a = advect(f, st.dt);

  // Body force and the previous pressure gradient go into the tentative velocity.
  FaceVec grad(grid_);
  pressure_gradient(a.p, grid_, bc_, grad.u, grad.v);
  axpy(-st.dt, grad.u, a.u);
  axpy(-st.dt, grad.v, a.v);
  if (!forcing_.is_zero()) {
    FaceVec force = forcing_.sample(grid_, t + st.dt);
    mask_unknowns(force, grid_, ranges_);
    axpy(st.dt, force.u, a.u);
    axpy(st.dt, force.v, a.v);
  }
  apply_bcs(a, grid_, bc_);

  DiffuseResult d = diffuse_implicit(a, st.dt);
  st.picard_iterations = d.picard_iterations;
  st.linear_iterations = d.linear_iterations;
  ProjectResult p = pressure_project(d.field, st.dt);
  st.poisson_iterations = p.iterations;
  st.max_divergence = p.max_divergence;
  apply_bcs(p.field, grid_, bc_);
  return {std::move(p.field), st};
}

StaggeredField FlowSolver::prepare_initial(const StaggeredField& init) const {
  require_matches(init, grid_, "prepare_initial");
  // Unit dt: the projection itself does not depend on it, only the pressure scale.
  ProjectResult p = pressure_project(init, 1.0);
  p.field.p.fill(0.0);
  return p.field;
}

double FlowSolver::viscous_form(const StaggeredField& u, const StaggeredField& w,
                                const ViscosityField& eta) const {
  const int nx = grid_.nx(), ny = grid_.ny();
  const double dx = grid_.dx(), dy = grid_.dy();
  double s = 0.0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double uxa = (u.u(i + 1, j) - u.u(i, j)) / dx;
      const double vya = (u.v(i, j + 1) - u.v(i, j)) / dy;
      const double uxb = (w.u(i + 1, j) - w.u(i, j)) / dx;
      const double vyb = (w.v(i, j + 1) - w.v(i, j)) / dy;
      s += 2.0 * eta.cell(i, j) * (uxa * uxb + vya * vyb);
    }
  }
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      const double sa = (u.u(i, j) - u.u(i, j - 1)) / dy + (u.v(i, j) - u.v(i - 1, j)) / dx;
      const double sb = (w.u(i, j) - w.u(i, j - 1)) / dy + (w.v(i, j) - w.v(i - 1, j)) / dx;
      s += corner_weight(i, j, grid_) * eta.corner(i, j) * sa * sb;
    }
  }
  return s * grid_.cell_area();
}

double FlowSolver::newtonian_form(const StaggeredField& u, const StaggeredField& w) const {
  ViscosityField eta{CellField(grid_.nx(), grid_.ny(), params_.mu()),
                     Array2D(grid_.nx() + 1, grid_.ny() + 1, params_.mu())};
  return viscous_form(u, w, eta);
}

double FlowSolver::dissipation_rate(const StaggeredField& f) const {
  return viscous_form(f, f, viscosity(f));
}

double FlowSolver::advection_pairing(const StaggeredField& u, const StaggeredField& w) const {
  FaceVec n(grid_);
  kernels::parallel::advection(u.u, u.v, grid_, ranges_, n.u, n.v);
  return kernels::parallel::dot_faces(n.u, n.v, w.u, w.v, grid_, ranges_) * grid_.cell_area();
}

double FlowSolver::forcing_pairing(const StaggeredField& w, double t) const {
  if (forcing_.is_zero()) return 0.0;
  const FaceVec f = forcing_.sample(grid_, t);
  StaggeredField fs(grid_);
  fs.u = f.u;
  fs.v = f.v;
  return inner_H(fs, w, grid_);
}

RunResult FlowSolver::run_to_steady(const StaggeredField& init, const RunOptions& opts) const {
  require_matches(init, grid_, "run_to_steady");
  RunResult out;
  StaggeredField state = init;
  apply_bcs(state, grid_, bc_);
  if (opts.project_initial) state = prepare_initial(state);

  const int stride = std::max(1, opts.record_every);
  auto record = [&](double t, const StaggeredField& s, const StepStats& st) {
    RunReport& rep = out.report;
    rep.push("t", t);
    rep.push("norm_H", norm_H(s, grid_));
    rep.push("norm_V", norm_V(s, grid_));
    rep.push("norm_L4", norm_L4(s, grid_));
    rep.push("ladyzhenskaya_ratio", ladyzhenskaya_ratio(s, grid_));
    const TensorField d = compute_strain(s, grid_);
    TensorField tau(grid_);
    const double gm = gamma_m(params_, cfg_.m);
    int yielded = 0;
    for (int j = 0; j < grid_.ny(); ++j) {
      for (int i = 0; i < grid_.nx(); ++i) {
        tau(i, j) = biviscosity_stress(d(i, j), params_, cfg_.m);
        if (tensor_norm(d(i, j)) > gm) ++yielded;
      }
    }
    rep.push("norm_tau", tensor_field_norm(tau, grid_));
    rep.push("yielded_fraction", static_cast<double>(yielded) / (grid_.nx() * grid_.ny()));
    rep.push("picard_iterations", st.picard_iterations);
    rep.push("poisson_iterations", st.poisson_iterations);
    rep.push("max_divergence", max_abs_divergence(s, grid_));
    rep.push("advection_orthogonality", advection_pairing(s, s));
    rep.push("dt", st.dt);
  };

  double t = 0.0;
  StepStats none;
  record(t, state, none);
  if (opts.record_history) out.history.push_back({t, state});
  if (opts.on_step) opts.on_step({t, state}, none);

  const double t_stop = cfg_.t_end * (1.0 - 1e-12);
  double max_div = 0.0;
  while (t < t_stop) {
    StepResult sr = step(state, t);
    const double dt = sr.stats.dt;
    t += dt;
    ++out.steps;
    const StaggeredField diff = velocity_difference(sr.state, state, grid_);
    out.final_change = norm_H(diff, grid_) / dt;
    max_div = std::max(max_div, sr.stats.max_divergence);
    state = std::move(sr.state);

    const bool steady = out.final_change < cfg_.steady_tol;
    const bool last = steady || t >= t_stop;
    if (out.steps % stride == 0 || last) {
      record(t, state, sr.stats);
      if (opts.record_history) out.history.push_back({t, state});
    }
    if (opts.on_step) opts.on_step({t, state}, sr.stats);
    if (steady) {
      out.reached_steady = true;
      break;
    }
  }
  out.t = t;
  out.state = std::move(state);
  out.report.scalars["t_final"] = t;
  out.report.scalars["steps"] = out.steps;
  out.report.scalars["final_change"] = out.final_change;
  out.report.scalars["reached_steady"] = out.reached_steady ? 1.0 : 0.0;
  out.report.scalars["max_divergence"] = max_div;
  out.report.scalars["m"] = cfg_.m.m();
  out.report.assertions["divergence_within_10x_poisson_tol"] = max_div <= 10.0 * cfg_.poisson_tol;
  return out;
}

}  // namespace bingham
