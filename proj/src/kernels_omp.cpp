// OpenMP stencils. Rows (j) are distributed across threads; every kernel
// computes each output entry with the same expression as the serial
// reference so the two agree bit for bit outside of reductions.

#include "bingham/kernels.hpp"

namespace bingham::kernels::parallel {

namespace {

inline const double* row(const Array2D& a, int j) { return a.raw().data() + a.offset(0, j); }
inline double* row(Array2D& a, int j) { return a.raw().data() + a.offset(0, j); }

}  // namespace

void corner_shear(const Array2D& u, const Array2D& v, const Grid& g, Array2D& dxy) {
  const double dx = g.dx(), dy = g.dy();
  const int nx = g.nx(), ny = g.ny();
#pragma omp parallel for schedule(static)
  for (int j = 0; j <= ny; ++j) {
    const double* uj = row(u, j);
    const double* ujm = row(u, j - 1);
    const double* vj = row(v, j);
    double* out = row(dxy, j);
    for (int i = 0; i <= nx; ++i) {
      out[i] = 0.5 * ((uj[i] - ujm[i]) / dy + (vj[i] - vj[i - 1]) / dx);
    }
  }
}

void cell_strain(const Array2D& u, const Array2D& v, const Grid& g, TensorField& out) {
  Array2D dxy = make_corner_array(g);
  corner_shear(u, v, g, dxy);
  const double dx = g.dx(), dy = g.dy();
  const int nx = g.nx(), ny = g.ny();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    const double* uj = row(u, j);
    const double* vj = row(v, j);
    const double* vjp = row(v, j + 1);
    const double* cj = row(dxy, j);
    const double* cjp = row(dxy, j + 1);
    for (int i = 0; i < nx; ++i) {
      SymTensor2& d = out(i, j);
      d.xx = (uj[i + 1] - uj[i]) / dx;
      d.yy = (vjp[i] - vj[i]) / dy;
      d.xy = 0.25 * (cj[i] + cj[i + 1] + cjp[i] + cjp[i + 1]);
    }
  }
}

void divergence(const Array2D& u, const Array2D& v, const Grid& g, CellField& out) {
  const double dx = g.dx(), dy = g.dy();
  const int nx = g.nx(), ny = g.ny();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    const double* uj = row(u, j);
    const double* vj = row(v, j);
    const double* vjp = row(v, j + 1);
    double* o = row(out, j);
    for (int i = 0; i < nx; ++i) {
      o[i] = (uj[i + 1] - uj[i]) / dx + (vjp[i] - vj[i]) / dy;
    }
  }
}

void advection(const Array2D& u, const Array2D& v, const Grid& g, const FaceRanges& r,
               Array2D& nu, Array2D& nv) {
  const double dx = g.dx(), dy = g.dy();
  const int nx = g.nx(), ny = g.ny();
  nu.fill(0.0);
  nv.fill(0.0);
#pragma omp parallel
  {
#pragma omp for schedule(static) nowait
    for (int j = 0; j < ny; ++j) {
      const double* uj = row(u, j);
      const double* ujm = row(u, j - 1);
      const double* ujp = row(u, j + 1);
      const double* vj = row(v, j);
      const double* vjp = row(v, j + 1);
      double* o = row(nu, j);
      for (int i = r.u_i0; i < r.u_i1; ++i) {
        const double ue = 0.5 * (uj[i] + uj[i + 1]);
        const double uw = 0.5 * (uj[i - 1] + uj[i]);
        const double un = 0.5 * (uj[i] + ujp[i]);
        const double us = 0.5 * (ujm[i] + uj[i]);
        const double vn = 0.5 * (vjp[i - 1] + vjp[i]);
        const double vs = 0.5 * (vj[i - 1] + vj[i]);
        o[i] = (ue * ue - uw * uw) / dx + (un * vn - us * vs) / dy;
      }
    }
#pragma omp for schedule(static)
    for (int j = r.v_j0; j < r.v_j1; ++j) {
      const double* vj = row(v, j);
      const double* vjm = row(v, j - 1);
      const double* vjp = row(v, j + 1);
      const double* uj = row(u, j);
      const double* ujm = row(u, j - 1);
      double* o = row(nv, j);
      for (int i = 0; i < nx; ++i) {
        const double vn = 0.5 * (vj[i] + vjp[i]);
        const double vs = 0.5 * (vjm[i] + vj[i]);
        const double ve = 0.5 * (vj[i] + vj[i + 1]);
        const double vw = 0.5 * (vj[i - 1] + vj[i]);
        const double ue = 0.5 * (ujm[i + 1] + uj[i + 1]);
        const double uw = 0.5 * (ujm[i] + uj[i]);
        o[i] = (ue * ve - uw * vw) / dx + (vn * vn - vs * vs) / dy;
      }
    }
  }
}

void viscous_apply(const Array2D& wu, const Array2D& wv, const CellField& eta_c,
                   const Array2D& eta_k, const Grid& g, const FaceRanges& r, bool periodic_x,
                   ViscousWork& work, Array2D& out_u, Array2D& out_v) {
  work.ensure(g);
  const double dx = g.dx(), dy = g.dy();
  const int nx = g.nx(), ny = g.ny();
  out_u.fill(0.0);
  out_v.fill(0.0);
#pragma omp parallel
  {
#pragma omp for schedule(static) nowait
    for (int j = 0; j < ny; ++j) {
      const double* uj = row(wu, j);
      const double* vj = row(wv, j);
      const double* vjp = row(wv, j + 1);
      const double* ej = row(eta_c, j);
      double* sxx = row(work.sxx, j);
      double* syy = row(work.syy, j);
      for (int i = 0; i < nx; ++i) {
        sxx[i] = 2.0 * ej[i] * ((uj[i + 1] - uj[i]) / dx);
        syy[i] = 2.0 * ej[i] * ((vjp[i] - vj[i]) / dy);
      }
      if (periodic_x) {
        sxx[-1] = sxx[nx - 1];
      }
    }
#pragma omp for schedule(static)
    for (int j = 0; j <= ny; ++j) {
      const double* uj = row(wu, j);
      const double* ujm = row(wu, j - 1);
      const double* vj = row(wv, j);
      const double* ek = row(eta_k, j);
      double* sxy = row(work.sxy, j);
      for (int i = 0; i <= nx; ++i) {
        sxy[i] = ek[i] * ((uj[i] - ujm[i]) / dy + (vj[i] - vj[i - 1]) / dx);
      }
    }
#pragma omp for schedule(static) nowait
    for (int j = 0; j < ny; ++j) {
      const double* sxx = row(work.sxx, j);
      const double* sxy = row(work.sxy, j);
      const double* sxyp = row(work.sxy, j + 1);
      double* o = row(out_u, j);
      for (int i = r.u_i0; i < r.u_i1; ++i) {
        o[i] = -((sxx[i] - sxx[i - 1]) / dx + (sxyp[i] - sxy[i]) / dy);
      }
    }
#pragma omp for schedule(static)
    for (int j = r.v_j0; j < r.v_j1; ++j) {
      const double* sxy = row(work.sxy, j);
      const double* syy = row(work.syy, j);
      const double* syym = row(work.syy, j - 1);
      double* o = row(out_v, j);
      for (int i = 0; i < nx; ++i) {
        o[i] = -((sxy[i + 1] - sxy[i]) / dx + (syy[i] - syym[i]) / dy);
      }
    }
  }
}

void laplacian(const CellField& phi, const Grid& g, bool periodic_x, CellField& out) {
  const double idx2 = 1.0 / (g.dx() * g.dx());
  const double idy2 = 1.0 / (g.dy() * g.dy());
  const int nx = g.nx(), ny = g.ny();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    const double* pj = row(phi, j);
    const double* pjm = row(phi, j - 1);
    const double* pjp = row(phi, j + 1);
    double* o = row(out, j);
    for (int i = 0; i < nx; ++i) {
      const double c = pj[i];
      double fx = 0.0;
      if (i + 1 < nx) {
        fx += pj[i + 1] - c;
      } else if (periodic_x) {
        fx += pj[0] - c;
      }
      if (i > 0) {
        fx -= c - pj[i - 1];
      } else if (periodic_x) {
        fx -= c - pj[nx - 1];
      }
      double fy = 0.0;
      if (j + 1 < ny) fy += pjp[i] - c;
      if (j > 0) fy -= c - pjm[i];
      o[i] = fx * idx2 + fy * idy2;
    }
  }
}

double dot_faces(const Array2D& au, const Array2D& av, const Array2D& bu, const Array2D& bv,
                 const Grid& g, const FaceRanges& r) {
  double s = 0.0;
  const int nx = g.nx(), ny = g.ny();
#pragma omp parallel reduction(+ : s)
  {
#pragma omp for schedule(static) nowait
    for (int j = 0; j < ny; ++j) {
      const double* a = row(au, j);
      const double* b = row(bu, j);
      for (int i = r.u_i0; i < r.u_i1; ++i) s += a[i] * b[i];
    }
#pragma omp for schedule(static)
    for (int j = r.v_j0; j < r.v_j1; ++j) {
      const double* a = row(av, j);
      const double* b = row(bv, j);
      for (int i = 0; i < nx; ++i) s += a[i] * b[i];
    }
  }
  return s;
}

double dot_cells(const CellField& a, const CellField& b, const Grid& g) {
  double s = 0.0;
  const int nx = g.nx(), ny = g.ny();
#pragma omp parallel for schedule(static) reduction(+ : s)
  for (int j = 0; j < ny; ++j) {
    const double* aj = row(a, j);
    const double* bj = row(b, j);
    for (int i = 0; i < nx; ++i) s += aj[i] * bj[i];
  }
  return s;
}

}  // namespace bingham::kernels::parallel
