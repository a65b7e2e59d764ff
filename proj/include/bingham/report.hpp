/// @file report.hpp
/// @brief Plain data records produced by runs and diagnostics.
#pragma once

#include <map>
#include <string>
#include <vector>

namespace bingham {

/// Kinetic-energy balance over [s1, s2], density normalized to 1.
/// residual = kinetic_end + dissipation - work - kinetic_start.
struct EnergyLedger {
  double s1 = 0.0;
  double s2 = 0.0;
  double kinetic_start = 0.0;
  double kinetic_end = 0.0;
  double dissipation = 0.0;     ///< time integral of tau_m(Du):Du
  double coercive_floor = 0.0;  ///< time integral of 2 mu |Du|^2, same quadrature
  double work = 0.0;            ///< time integral of <f, u>
  double residual = 0.0;
};

/// Time series keyed by name plus derived records. Every series entry
/// corresponds to one recorded state.
struct RunReport {
  std::map<std::string, std::vector<double>> series;
  std::vector<EnergyLedger> ledgers;
  std::map<std::string, double> scalars;
  std::map<std::string, bool> assertions;
  std::map<std::string, std::string> config;

  void push(const std::string& name, double value) { series[name].push_back(value); }
  bool all_assertions_pass() const {
    for (const auto& [name, ok] : assertions) {
      if (!ok) return false;
    }
    return true;
  }
};

}  // namespace bingham
