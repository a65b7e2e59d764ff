// Reference stencils: straightforward loops over the ghosted accessors.

#include "bingham/kernels.hpp"

namespace bingham::kernels {

void ViscousWork::ensure(const Grid& g) {
  if (sxx.ni() != g.nx() || sxx.nj() != g.ny()) {
    sxx = Array2D(g.nx(), g.ny());
    syy = Array2D(g.nx(), g.ny());
  }
  if (sxy.ni() != g.nx() + 1 || sxy.nj() != g.ny() + 1) {
    sxy = make_corner_array(g);
  }
}

namespace serial {

void corner_shear(const Array2D& u, const Array2D& v, const Grid& g, Array2D& dxy) {
  const double dx = g.dx(), dy = g.dy();
  for (int j = 0; j <= g.ny(); ++j) {
    for (int i = 0; i <= g.nx(); ++i) {
      dxy(i, j) = 0.5 * ((u(i, j) - u(i, j - 1)) / dy + (v(i, j) - v(i - 1, j)) / dx);
    }
  }
}

void cell_strain(const Array2D& u, const Array2D& v, const Grid& g, TensorField& out) {
  Array2D dxy = make_corner_array(g);
  corner_shear(u, v, g, dxy);
  const double dx = g.dx(), dy = g.dy();
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      SymTensor2& d = out(i, j);
      d.xx = (u(i + 1, j) - u(i, j)) / dx;
      d.yy = (v(i, j + 1) - v(i, j)) / dy;
      d.xy = 0.25 * (dxy(i, j) + dxy(i + 1, j) + dxy(i, j + 1) + dxy(i + 1, j + 1));
    }
  }
}

void divergence(const Array2D& u, const Array2D& v, const Grid& g, CellField& out) {
  const double dx = g.dx(), dy = g.dy();
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      out(i, j) = (u(i + 1, j) - u(i, j)) / dx + (v(i, j + 1) - v(i, j)) / dy;
    }
  }
}

void advection(const Array2D& u, const Array2D& v, const Grid& g, const FaceRanges& r,
               Array2D& nu, Array2D& nv) {
  const double dx = g.dx(), dy = g.dy();
  nu.fill(0.0);
  nv.fill(0.0);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = r.u_i0; i < r.u_i1; ++i) {
      const double ue = 0.5 * (u(i, j) + u(i + 1, j));
      const double uw = 0.5 * (u(i - 1, j) + u(i, j));
      const double un = 0.5 * (u(i, j) + u(i, j + 1));
      const double us = 0.5 * (u(i, j - 1) + u(i, j));
      const double vn = 0.5 * (v(i - 1, j + 1) + v(i, j + 1));
      const double vs = 0.5 * (v(i - 1, j) + v(i, j));
      nu(i, j) = (ue * ue - uw * uw) / dx + (un * vn - us * vs) / dy;
    }
  }
  for (int j = r.v_j0; j < r.v_j1; ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double vn = 0.5 * (v(i, j) + v(i, j + 1));
      const double vs = 0.5 * (v(i, j - 1) + v(i, j));
      const double ve = 0.5 * (v(i, j) + v(i + 1, j));
      const double vw = 0.5 * (v(i - 1, j) + v(i, j));
      const double ue = 0.5 * (u(i + 1, j - 1) + u(i + 1, j));
      const double uw = 0.5 * (u(i, j - 1) + u(i, j));
      nv(i, j) = (ue * ve - uw * vw) / dx + (vn * vn - vs * vs) / dy;
    }
  }
}

void viscous_apply(const Array2D& wu, const Array2D& wv, const CellField& eta_c,
                   const Array2D& eta_k, const Grid& g, const FaceRanges& r, bool periodic_x,
                   ViscousWork& work, Array2D& out_u, Array2D& out_v) {
  work.ensure(g);
  const double dx = g.dx(), dy = g.dy();
  const int nx = g.nx(), ny = g.ny();
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      work.sxx(i, j) = 2.0 * eta_c(i, j) * ((wu(i + 1, j) - wu(i, j)) / dx);
      work.syy(i, j) = 2.0 * eta_c(i, j) * ((wv(i, j + 1) - wv(i, j)) / dy);
    }
    if (periodic_x) {
      work.sxx(-1, j) = work.sxx(nx - 1, j);
    }
  }
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      work.sxy(i, j) =
          eta_k(i, j) * ((wu(i, j) - wu(i, j - 1)) / dy + (wv(i, j) - wv(i - 1, j)) / dx);
    }
  }
  out_u.fill(0.0);
  out_v.fill(0.0);
  for (int j = 0; j < ny; ++j) {
    for (int i = r.u_i0; i < r.u_i1; ++i) {
      out_u(i, j) = -((work.sxx(i, j) - work.sxx(i - 1, j)) / dx +
                      (work.sxy(i, j + 1) - work.sxy(i, j)) / dy);
    }
  }
  for (int j = r.v_j0; j < r.v_j1; ++j) {
    for (int i = 0; i < nx; ++i) {
      out_v(i, j) = -((work.sxy(i + 1, j) - work.sxy(i, j)) / dx +
                      (work.syy(i, j) - work.syy(i, j - 1)) / dy);
    }
  }
}

void laplacian(const CellField& phi, const Grid& g, bool periodic_x, CellField& out) {
  const double idx2 = 1.0 / (g.dx() * g.dx());
  const double idy2 = 1.0 / (g.dy() * g.dy());
  const int nx = g.nx(), ny = g.ny();
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double c = phi(i, j);
      double fx = 0.0;
      if (i + 1 < nx) {
        fx += phi(i + 1, j) - c;
      } else if (periodic_x) {
        fx += phi(0, j) - c;
      }
      if (i > 0) {
        fx -= c - phi(i - 1, j);
      } else if (periodic_x) {
        fx -= c - phi(nx - 1, j);
      }
      double fy = 0.0;
      if (j + 1 < ny) fy += phi(i, j + 1) - c;
      if (j > 0) fy -= c - phi(i, j - 1);
      out(i, j) = fx * idx2 + fy * idy2;
    }
  }
}

double dot_faces(const Array2D& au, const Array2D& av, const Array2D& bu, const Array2D& bv,
                 const Grid& g, const FaceRanges& r) {
  double s = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = r.u_i0; i < r.u_i1; ++i) s += au(i, j) * bu(i, j);
  }
  for (int j = r.v_j0; j < r.v_j1; ++j) {
    for (int i = 0; i < g.nx(); ++i) s += av(i, j) * bv(i, j);
  }
  return s;
}

double dot_cells(const CellField& a, const CellField& b, const Grid& g) {
  double s = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) s += a(i, j) * b(i, j);
  }
  return s;
}

}  // namespace serial
}  // namespace bingham::kernels
