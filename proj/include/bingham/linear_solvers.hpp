/// @file linear_solvers.hpp
/// @brief Preconditioned conjugate gradients for the two SPD systems of a step.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "bingham/grid.hpp"

namespace bingham {

/// Velocity work vector (ghosts included; only unknown faces are meaningful).
struct FaceVec {
  Array2D u, v;

  FaceVec() = default;
  explicit FaceVec(const Grid& g) : u(g.nx() + 1, g.ny()), v(g.nx(), g.ny() + 1) {}
  FaceVec(Array2D uu, Array2D vv) : u(std::move(uu)), v(std::move(vv)) {}
};

/// y += a * x over the whole storage.
void axpy(double a, const FaceVec& x, FaceVec& y);
void axpy(double a, const Array2D& x, Array2D& y);
/// y = x + b * y.
void xpby(const FaceVec& x, double b, FaceVec& y);
void xpby(const Array2D& x, double b, Array2D& y);

struct CgResult {
  int iterations = 0;
  double residual = 0.0;  ///< value of the caller's stopping metric at exit
  bool converged = false;
};

class LinearSolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Jacobi-preconditioned CG on x for A x = b, starting from the given x.
///
/// `apply(p, out)` may rewrite ghosts of p. `precond(r, z)` sets z = M^-1 r.
/// `metric(r)` is the stopping quantity; iteration stops once it is <= tol.
template <class Vec, class Apply, class Precond, class Dot, class Metric>
CgResult pcg(Apply&& apply, Precond&& precond, Dot&& dot, Metric&& metric, const Vec& b, Vec& x,
             double tol, int max_iter) {
  Vec r = b;
  Vec ap = b;
  apply(x, ap);
  axpy(-1.0, ap, r);
  CgResult res;
  res.residual = metric(r);
  if (res.residual <= tol) {
    res.converged = true;
    return res;
  }
  Vec z = b;
  precond(r, z);
  Vec p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= max_iter; ++it) {
    apply(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0) || !std::isfinite(pap)) {
      throw LinearSolveError("conjugate gradients broke down (p.Ap = " + std::to_string(pap) +
                             ") at iteration " + std::to_string(it));
    }
    const double alpha = rz / pap;
    axpy(alpha, p, x);
    axpy(-alpha, ap, r);
    res.iterations = it;
    res.residual = metric(r);
    if (res.residual <= tol) {
      res.converged = true;
      return res;
    }
    precond(r, z);
    const double rz_new = dot(r, z);
    xpby(z, rz_new / rz, p);
    rz = rz_new;
  }
  return res;
}

}  // namespace bingham
