/// @file report_io.hpp
/// @brief JSON reports, CSV field dumps and checkpoints.
#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "bingham/continuation.hpp"
#include "bingham/diagnostics.hpp"
#include "bingham/report.hpp"

namespace bingham {

nlohmann::json to_json(const EnergyLedger& l);
nlohmann::json to_json(const RunReport& r);
nlohmann::json to_json(const LimitReport& r);
nlohmann::json to_json(const DecayReport& r);

/// Writes {"run": ..., "limit": ...} (limit only when given), pretty printed.
void write_report_json(const std::filesystem::path& path, const RunReport& run,
                       const std::optional<LimitReport>& limit = std::nullopt);
/// Throws std::runtime_error on unreadable or malformed files.
nlohmann::json read_report_json(const std::filesystem::path& path);
/// Human-readable summary of a report document.
std::string summarize_report(const nlohmann::json& doc);

/// One row per cell center: x,y,u,v,p,|D|,yielded (velocities averaged to
/// centers; yielded is 1 when |D| > gamma_m).
void write_fields_csv(const std::filesystem::path& path, const StaggeredField& f, const Grid& g,
                      const FluidParams& p, const RegIndex& r);

struct Checkpoint {
  double t = 0.0;
  double m = 2.0;
  std::string config_hash;
  StaggeredField state;
};

/// Header `# t=<t> m=<m> hash=<hash> nx=<nx> ny=<ny>`, then the field CSV
/// columns x,y,u,v,p followed by i,j,u_face,v_face carrying the exact west
/// and south face values so that restore is lossless.
void write_checkpoint(const std::filesystem::path& path, const StaggeredField& f, const Grid& g,
                      double t, double m, const std::string& config_hash);
/// Rebuilds the state on g; wall and ghost values come from bc.
Checkpoint read_checkpoint(const std::filesystem::path& path, const Grid& g,
                           const BoundarySpec& bc);

}  // namespace bingham
