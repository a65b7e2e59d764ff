#include "bingham/operators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bingham/kernels.hpp"

namespace bingham {

TensorField compute_strain(const StaggeredField& f, const Grid& g) {
  require_matches(f, g, "compute_strain");
  TensorField out(g);
  kernels::parallel::cell_strain(f.u, f.v, g, out);
  return out;
}

CellField compute_divergence(const StaggeredField& f, const Grid& g) {
  require_matches(f, g, "compute_divergence");
  CellField out(g.nx(), g.ny());
  kernels::parallel::divergence(f.u, f.v, g, out);
  return out;
}

double max_abs_divergence(const StaggeredField& f, const Grid& g) {
  const CellField div = compute_divergence(f, g);
  double m = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) m = std::max(m, std::abs(div(i, j)));
  }
  return m;
}

double corner_weight(int i, int j, const Grid& g) {
  const double wx = (i == 0 || i == g.nx()) ? 0.5 : 1.0;
  const double wy = (j == 0 || j == g.ny()) ? 0.5 : 1.0;
  return wx * wy;
}

double u_face_weight(int i, const Grid& g) { return (i == 0 || i == g.nx()) ? 0.5 : 1.0; }
double v_face_weight(int j, const Grid& g) { return (j == 0 || j == g.ny()) ? 0.5 : 1.0; }

double inner_H(const StaggeredField& a, const StaggeredField& b, const Grid& g) {
  require_matches(a, g, "inner_H");
  require_matches(b, g, "inner_H");
  double s = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i <= g.nx(); ++i) s += u_face_weight(i, g) * a.u(i, j) * b.u(i, j);
  }
  for (int j = 0; j <= g.ny(); ++j) {
    const double w = v_face_weight(j, g);
    for (int i = 0; i < g.nx(); ++i) s += w * a.v(i, j) * b.v(i, j);
  }
  return s * g.cell_area();
}

double norm_H(const StaggeredField& f, const Grid& g) { return std::sqrt(inner_H(f, f, g)); }

double norm_V(const StaggeredField& f, const Grid& g) {
  require_matches(f, g, "norm_V");
  const double dx = g.dx(), dy = g.dy();
  double s = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double ux = (f.u(i + 1, j) - f.u(i, j)) / dx;
      const double vy = (f.v(i, j + 1) - f.v(i, j)) / dy;
      s += ux * ux + vy * vy;
    }
  }
  for (int j = 0; j <= g.ny(); ++j) {
    for (int i = 0; i <= g.nx(); ++i) {
      const double uy = (f.u(i, j) - f.u(i, j - 1)) / dy;
      const double vx = (f.v(i, j) - f.v(i - 1, j)) / dx;
      s += corner_weight(i, j, g) * (uy * uy + vx * vx);
    }
  }
  return std::sqrt(s * g.cell_area());
}

double norm_L4(const StaggeredField& f, const Grid& g) {
  require_matches(f, g, "norm_L4");
  double s = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double uc = 0.5 * (f.u(i, j) + f.u(i + 1, j));
      const double vc = 0.5 * (f.v(i, j) + f.v(i, j + 1));
      const double m2 = uc * uc + vc * vc;
      s += m2 * m2;
    }
  }
  return std::pow(s * g.cell_area(), 0.25);
}

double ladyzhenskaya_ratio(const StaggeredField& f, const Grid& g) {
  const double l2 = norm_H(f, g);
  if (l2 == 0.0) return 0.0;
  const double h1 = std::hypot(l2, norm_V(f, g));
  const double l4 = norm_L4(f, g);
  return l4 * l4 / (h1 * l2);
}

double tensor_field_norm(const TensorField& t, const Grid& g) {
  double s = 0.0;
  for (const SymTensor2& a : t.values()) s += contract(a, a);
  return std::sqrt(s * g.cell_area());
}

StaggeredField velocity_difference(const StaggeredField& a, const StaggeredField& b, const Grid& g) {
  require_matches(a, g, "velocity_difference");
  require_matches(b, g, "velocity_difference");
  StaggeredField d(g);
  for (std::size_t k = 0; k < d.u.raw().size(); ++k) d.u.raw()[k] = a.u.raw()[k] - b.u.raw()[k];
  for (std::size_t k = 0; k < d.v.raw().size(); ++k) d.v.raw()[k] = a.v.raw()[k] - b.v.raw()[k];
  return d;
}

void pressure_gradient(const CellField& p, const Grid& g, const BoundarySpec& bc, Array2D& gu,
                       Array2D& gv) {
  const FaceRanges r = unknown_faces(g, bc);
  gu.fill(0.0);
  gv.fill(0.0);
  const double dx = g.dx(), dy = g.dy();
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = r.u_i0; i < r.u_i1; ++i) {
      const double west = i > 0 ? p(i - 1, j) : p(g.nx() - 1, j);
      gu(i, j) = (p(i, j) - west) / dx;
    }
  }
  for (int j = r.v_j0; j < r.v_j1; ++j) {
    for (int i = 0; i < g.nx(); ++i) gv(i, j) = (p(i, j) - p(i, j - 1)) / dy;
  }
}

StaggeredField curl_of_streamfunction(const Array2D& psi, const Grid& g, const BoundarySpec& bc) {
  if (psi.ni() != g.nx() + 1 || psi.nj() != g.ny() + 1) {
    throw std::invalid_argument("curl_of_streamfunction: psi must live on the grid corners");
  }
  StaggeredField f(g);
  const double dx = g.dx(), dy = g.dy();
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i <= g.nx(); ++i) f.u(i, j) = (psi(i, j + 1) - psi(i, j)) / dy;
  }
  for (int j = 0; j <= g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) f.v(i, j) = -(psi(i + 1, j) - psi(i, j)) / dx;
  }
  apply_bcs(f, g, bc);
  return f;
}

StaggeredField random_solenoidal_field(const Grid& g, const BoundarySpec& bc, std::uint64_t seed,
                                       double amplitude, int modes) {
  using std::numbers::pi;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);

  struct Mode {
    double a, b, phase_y;
    int k, l;
  };
  std::vector<Mode> ms;
  for (int k = 0; k < modes; ++k) {
    for (int l = 0; l < modes; ++l) {
      ms.push_back({coef(rng), coef(rng), phase(rng), k, l});
    }
  }

  const bool periodic = bc.periodic_x();
  Array2D psi(g.nx() + 1, g.ny() + 1);
  for (int j = 0; j <= g.ny(); ++j) {
    const double y = g.y_face(j) / g.ly();
    const double sy = std::sin(pi * y);
    for (int i = 0; i <= g.nx(); ++i) {
      const double x = g.x_face(i) / g.lx();
      const double sx = std::sin(pi * x);
      double s = 0.0;
      for (const Mode& m : ms) {
        const double wy = std::cos(m.l * pi * y + m.phase_y);
        if (periodic) {
          s += (m.a * std::cos(2.0 * pi * m.k * x) + m.b * std::sin(2.0 * pi * m.k * x)) * wy;
        } else {
          s += m.a * std::cos(m.k * pi * x + m.b * pi) * wy;
        }
      }
      psi(i, j) = (periodic ? 1.0 : sx * sx) * sy * sy * s;
    }
  }
  if (periodic) {
    for (int j = 0; j <= g.ny(); ++j) psi(g.nx(), j) = psi(0, j);
  } else {
    for (int j = 0; j <= g.ny(); ++j) psi(0, j) = psi(g.nx(), j) = 0.0;
  }
  for (int i = 0; i <= g.nx(); ++i) psi(i, 0) = psi(i, g.ny()) = 0.0;

  StaggeredField f = curl_of_streamfunction(psi, g, bc.homogeneous());
  const double n = norm_H(f, g);
  if (n > 0.0) {
    const double scale = amplitude / n;
    for (double& x : f.u.raw()) x *= scale;
    for (double& x : f.v.raw()) x *= scale;
  }
  apply_bcs(f, g, bc.homogeneous());
  return f;
}

StaggeredField sample_velocity(const Grid& g, const std::function<double(double, double)>& u_fn,
                               const std::function<double(double, double)>& v_fn) {
  StaggeredField f(g);
  for (int j = -1; j <= g.ny(); ++j) {
    for (int i = -1; i <= g.nx() + 1; ++i) f.u(i, j) = u_fn(g.x_face(i), g.y_center(j));
  }
  for (int j = -1; j <= g.ny() + 1; ++j) {
    for (int i = -1; i <= g.nx(); ++i) f.v(i, j) = v_fn(g.x_center(i), g.y_face(j));
  }
  return f;
}

}  // namespace bingham
