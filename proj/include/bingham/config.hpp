/// @file config.hpp
/// @brief Text run configuration: UTF-8 lines `key = value`, `#` comments.
///
/// Keys: scenario, nx, ny, lx, ly, mu, tau_y, m or m_schedule (comma list),
/// dt or cfl, t_end, steady_tol, picard_tol, picard_max, poisson_tol,
/// lid_speed, force_gx, out_dir, seed, warm_start, init_amplitude.
/// Unknown or repeated keys are errors.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bingham/continuation.hpp"
#include "bingham/scenario.hpp"
#include "bingham/solver.hpp"

namespace bingham {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

struct RunConfig {
  Scenario scenario;
  SolveConfig solve;
  FluidParams fluid{1.0, 0.5};
  MSchedule schedule;
  bool has_schedule = false;  ///< m_schedule given rather than a single m
  std::string out_dir = ".";
  std::uint64_t seed = 12345;
};

bool operator==(const RunConfig& a, const RunConfig& b);

/// Parse a config file; overrides (`key=value`) replace or add keys after
/// the file is read and are validated the same way.
RunConfig parse_config(const std::filesystem::path& path,
                       const std::vector<std::string>& overrides = {});
RunConfig parse_config_text(const std::string& text, const std::string& source = "<text>",
                            const std::vector<std::string>& overrides = {});
/// Defaults only (no file), plus overrides.
RunConfig default_config(const std::vector<std::string>& overrides = {});

/// Every key written explicitly with round-trip precision.
std::string serialize(const RunConfig& c);
/// Echo as key -> value strings (the serialized form split into pairs).
std::map<std::string, std::string> config_echo(const RunConfig& c);
/// FNV-1a of the serialized form, 16 hex digits.
std::string config_hash(const RunConfig& c);

}  // namespace bingham
