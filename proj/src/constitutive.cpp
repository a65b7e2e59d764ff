#include "bingham/constitutive.hpp"

#include <stdexcept>
#include <string>

namespace bingham {

namespace {

// Shared by both laws so that the plastic branches agree bit for bit.
SymTensor2 plastic_stress(const SymTensor2& d, double norm, const FluidParams& p) {
  return (2.0 * p.mu() + p.tau_y() / norm) * d;
}

}  // namespace

FluidParams::FluidParams(double mu, double tau_y) : mu_(mu), tau_y_(tau_y) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("viscosity mu must be finite and > 0, got " + std::to_string(mu));
  }
  if (!(tau_y >= 0.0) || !std::isfinite(tau_y)) {
    throw std::invalid_argument("yield stress tau_y must be finite and >= 0, got " +
                                std::to_string(tau_y));
  }
}

RegIndex::RegIndex(double m) : m_(m) {
  if (!(m >= 2.0) || !std::isfinite(m)) {
    throw std::invalid_argument("regularization index must satisfy m >= 2, got " +
                                std::to_string(m));
  }
}

double gamma_m(const FluidParams& p, const RegIndex& r) {
  return p.tau_y() / (2.0 * p.mu() * (r.m() - 1.0));
}

StressResult bingham_stress(const SymTensor2& d, const FluidParams& p) {
  const double n = tensor_norm(d);
  if (n > 0.0) {
    return {YieldState::Yielded, plastic_stress(d, n, p), 0.0};
  }
  return {YieldState::Unyielded, std::nullopt, p.tau_y()};
}

SymTensor2 bingham_stress_limit(const SymTensor2& d, const FluidParams& p) {
  const double n = tensor_norm(d);
  return n > 0.0 ? plastic_stress(d, n, p) : SymTensor2{};
}

SymTensor2 biviscosity_stress(const SymTensor2& d, const FluidParams& p, const RegIndex& r) {
  const double n = tensor_norm(d);
  if (n <= gamma_m(p, r)) {
    return (2.0 * r.m() * p.mu()) * d;
  }
  return plastic_stress(d, n, p);
}

double effective_viscosity(double shear, const FluidParams& p, const RegIndex& r) {
  if (!(shear >= 0.0)) {
    throw std::invalid_argument("effective_viscosity: shear must be >= 0, got " +
                                std::to_string(shear));
  }
  if (p.tau_y() == 0.0) {
    return p.mu();
  }
  if (shear <= gamma_m(p, r)) {
    return r.m() * p.mu();
  }
  return p.mu() + p.tau_y() / (2.0 * shear);
}

double monotonicity_gap(const SymTensor2& a, const SymTensor2& b, const FluidParams& p,
                        const RegIndex& r) {
  return contract(biviscosity_stress(a, p, r) - biviscosity_stress(b, p, r), a - b);
}

double bingham_monotonicity_gap(const SymTensor2& a, const SymTensor2& b, const FluidParams& p) {
  if (a.is_zero() || b.is_zero()) {
    throw std::invalid_argument(
        "bingham_monotonicity_gap: the Bingham stress is set-valued at a zero strain rate");
  }
  return contract(*bingham_stress(a, p).stress - *bingham_stress(b, p).stress, a - b);
}

double newtonian_branch_stress_bound(const FluidParams& p, const RegIndex& r) {
  return r.m() / (r.m() - 1.0) * p.tau_y();
}

}  // namespace bingham
