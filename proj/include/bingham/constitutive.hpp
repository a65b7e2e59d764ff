/// @file constitutive.hpp
/// @brief Bingham and bi-viscosity stress laws for 2D symmetric tensors.
///
/// The tensor norm is the Frobenius norm |A|^2 = A:A, so the off-diagonal
/// component is counted twice. This is not the engineering second invariant;
/// mixing the two conventions shifts every yield threshold by sqrt(2).
#pragma once

#include <cmath>
#include <optional>

namespace bingham {

/// Symmetric 2x2 tensor stored as (xx, yy, xy). The yx entry is xy.
struct SymTensor2 {
  double xx = 0.0;
  double yy = 0.0;
  double xy = 0.0;

  friend constexpr SymTensor2 operator+(SymTensor2 a, SymTensor2 b) {
    return {a.xx + b.xx, a.yy + b.yy, a.xy + b.xy};
  }
  friend constexpr SymTensor2 operator-(SymTensor2 a, SymTensor2 b) {
    return {a.xx - b.xx, a.yy - b.yy, a.xy - b.xy};
  }
  friend constexpr SymTensor2 operator*(double c, SymTensor2 a) {
    return {c * a.xx, c * a.yy, c * a.xy};
  }
  friend constexpr bool operator==(const SymTensor2&, const SymTensor2&) = default;

  constexpr double trace() const { return xx + yy; }
  constexpr bool is_zero() const { return xx == 0.0 && yy == 0.0 && xy == 0.0; }
};

/// A:B = sum_ij A_ij B_ij.
constexpr double contract(const SymTensor2& a, const SymTensor2& b) {
  return a.xx * b.xx + a.yy * b.yy + 2.0 * a.xy * b.xy;
}

inline double tensor_norm(const SymTensor2& a) { return std::sqrt(contract(a, a)); }

/// Viscosity mu > 0 and yield stress tau_y >= 0. tau_y = 0 is Newtonian.
class FluidParams {
 public:
  FluidParams(double mu, double tau_y);

  double mu() const { return mu_; }
  double tau_y() const { return tau_y_; }

  friend bool operator==(const FluidParams&, const FluidParams&) = default;

 private:
  double mu_;
  double tau_y_;
};

/// Regularization multiplier m >= 2. The artificial viscosity is m*mu.
class RegIndex {
 public:
  explicit RegIndex(double m);

  double m() const { return m_; }

  friend bool operator==(const RegIndex&, const RegIndex&) = default;

 private:
  double m_;
};

/// Branch switch threshold tau_y / (2 mu (m - 1)).
double gamma_m(const FluidParams& p, const RegIndex& r);

enum class YieldState { Yielded, Unyielded };

/// Value of the (set-valued) Bingham law. Below yield only the bound
/// |tau| <= tau_y is known, so no tensor is carried.
struct StressResult {
  YieldState kind = YieldState::Unyielded;
  std::optional<SymTensor2> stress;
  double bound = 0.0;
};

StressResult bingham_stress(const SymTensor2& d, const FluidParams& p);

/// Bingham stress with the pointwise-limit convention: zero where d = 0.
SymTensor2 bingham_stress_limit(const SymTensor2& d, const FluidParams& p);

SymTensor2 biviscosity_stress(const SymTensor2& d, const FluidParams& p, const RegIndex& r);

/// Scalar viscosity eta with tau_m(d) = 2 eta(|d|) d. Lies in [mu, m mu].
///
/// For tau_y = 0 the law is linear and eta = mu for every shear, including
/// shear = 0 where the stress vanishes on either branch.
double effective_viscosity(double shear, const FluidParams& p, const RegIndex& r);

/// (tau_m(a) - tau_m(b)) : (a - b); bounded below by 2 mu |a - b|^2.
double monotonicity_gap(const SymTensor2& a, const SymTensor2& b, const FluidParams& p,
                        const RegIndex& r);

/// Same gap for the Bingham law. Both arguments must be nonzero.
double bingham_monotonicity_gap(const SymTensor2& a, const SymTensor2& b, const FluidParams& p);

/// Largest |tau_m| possible on the Newtonian branch, m/(m-1) tau_y.
double newtonian_branch_stress_bound(const FluidParams& p, const RegIndex& r);

}  // namespace bingham
