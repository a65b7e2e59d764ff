/// @file verify.hpp
/// @brief Randomized constitutive property suite and analytic-oracle checks.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bingham {

struct CheckResult {
  std::string name;
  bool passed = false;
  long samples = 0;
  long violations = 0;
  double worst = 0.0;  ///< worst relative excess (or error) seen
  std::string detail;
};

struct SuiteOptions {
  long pairs = 200000;
  std::uint64_t seed = 20240611;
  int oracle_parameter_sets = 20;
  int oracle_points = 1000;
};

/// Coercivity, growth (both branches), monotonicity gap and its Case 1
/// equality, Bingham monotonicity, branch continuity at gamma_m and the
/// plastic-branch identity, over random tensor pairs spanning every branch
/// combination with random (mu, tau_y, m).
std::vector<CheckResult> constitutive_property_suite(const SuiteOptions& opt = {});

/// Channel closed form vs the quadrature oracle (relative to the profile
/// maximum) and the Newtonian parabola.
std::vector<CheckResult> oracle_checks(const SuiteOptions& opt = {});

std::string format_checks(const std::vector<CheckResult>& checks);

}  // namespace bingham
