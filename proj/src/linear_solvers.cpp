#include "bingham/linear_solvers.hpp"

namespace bingham {

void axpy(double a, const Array2D& x, Array2D& y) {
  const double* xs = x.raw().data();
  double* ys = y.raw().data();
  const long n = static_cast<long>(y.raw().size());
#pragma omp parallel for schedule(static)
  for (long k = 0; k < n; ++k) ys[k] += a * xs[k];
}

void xpby(const Array2D& x, double b, Array2D& y) {
  const double* xs = x.raw().data();
  double* ys = y.raw().data();
  const long n = static_cast<long>(y.raw().size());
#pragma omp parallel for schedule(static)
  for (long k = 0; k < n; ++k) ys[k] = xs[k] + b * ys[k];
}

void axpy(double a, const FaceVec& x, FaceVec& y) {
  axpy(a, x.u, y.u);
  axpy(a, x.v, y.v);
}

void xpby(const FaceVec& x, double b, FaceVec& y) {
  xpby(x.u, b, y.u);
  xpby(x.v, b, y.v);
}

}  // namespace bingham
