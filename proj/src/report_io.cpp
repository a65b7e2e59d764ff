#include "bingham/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bingham/operators.hpp"

namespace bingham {

using nlohmann::json;

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

json to_json(const EnergyLedger& l) {
  return {{"s1", l.s1},
          {"s2", l.s2},
          {"kinetic_start", l.kinetic_start},
          {"kinetic_end", l.kinetic_end},
          {"dissipation", l.dissipation},
          {"coercive_floor", l.coercive_floor},
          {"work", l.work},
          {"residual", l.residual}};
}

json to_json(const RunReport& r) {
  json j;
  j["series"] = r.series;
  j["scalars"] = r.scalars;
  j["assertions"] = r.assertions;
  j["config"] = r.config;
  j["ledgers"] = json::array();
  for (const EnergyLedger& l : r.ledgers) j["ledgers"].push_back(to_json(l));
  return j;
}

json to_json(const LimitReport& r) {
  json j;
  j["scenario"] = to_string(r.scenario);
  j["warm_start"] = r.warm_start;
  j["epsilon_yield"] = r.epsilon_yield;
  j["cell_size"] = r.cell_size;
  j["bingham_plug_half_width"] = r.bingham_plug_half_width;
  j["sup_H_spread"] = r.sup_H_spread();
  j["int_V2_spread"] = r.int_V2_spread();
  j["assertions"] = r.assertions();
  j["entries"] = json::array();
  for (const LimitEntry& e : r.entries) {
    j["entries"].push_back({{"m", e.m},
                            {"delta_H", e.delta_H},
                            {"yielded_fraction", e.yielded_fraction},
                            {"fixed_threshold_unyielded_fraction",
                             e.fixed_threshold_unyielded_fraction},
                            {"max_unyielded_stress", e.max_unyielded_stress},
                            {"stress_bound", e.stress_bound},
                            {"bound_violations", e.bound_violations},
                            {"yielded_deviation", e.yielded_deviation},
                            {"plug_half_width", e.plug_half_width},
                            {"oracle_plug_half_width", e.oracle_plug_half_width},
                            {"profile_error", e.profile_error},
                            {"sup_H", e.sup_H},
                            {"int_V2", e.int_V2},
                            {"max_divergence", e.max_divergence},
                            {"steps", e.steps},
                            {"total_picard", e.total_picard},
                            {"reached_steady", e.reached_steady}});
  }
  return j;
}

json to_json(const DecayReport& r) {
  return {{"t", r.t},
          {"difference", r.difference},
          {"integral_V2", r.integral_V2},
          {"envelope", r.envelope},
          {"d0", r.d0},
          {"c_fit", r.c_fit},
          {"fit_fraction", r.fit_fraction},
          {"within_envelope", r.within_envelope},
          {"monotone", r.monotone},
          {"both_steady", r.both_steady},
          {"final_difference", r.final_difference},
          {"final_ratio", r.final_ratio},
          {"steps", r.steps}};
}

void write_report_json(const std::filesystem::path& path, const RunReport& run,
                       const std::optional<LimitReport>& limit) {
  json doc;
  doc["run"] = to_json(run);
  if (limit) doc["limit"] = to_json(*limit);
  std::ofstream out = open_out(path);
  out << doc.dump(2) << "\n";
}

json read_report_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open report " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    throw std::runtime_error("malformed report " + path.string() + ": " + ex.what());
  }
}

std::string summarize_report(const json& doc) {
  std::ostringstream os;
  if (doc.contains("run")) {
    const json& run = doc["run"];
    if (run.contains("config") && run["config"].contains("scenario")) {
      os << "scenario: " << run["config"]["scenario"].get<std::string>() << "\n";
    }
    if (run.contains("scalars")) {
      for (const auto& [k, v] : run["scalars"].items()) os << "  " << k << " = " << v << "\n";
    }
    if (run.contains("ledgers") && !run["ledgers"].empty()) {
      double worst = 0.0;
      for (const json& l : run["ledgers"]) {
        worst = std::max(worst, std::abs(l.value("residual", 0.0)));
      }
      os << "  energy ledgers: " << run["ledgers"].size() << ", max |residual| = " << worst
         << "\n";
    }
    if (run.contains("assertions")) {
      for (const auto& [k, v] : run["assertions"].items()) {
        os << "  [" << (v.get<bool>() ? "PASS" : "FAIL") << "] " << k << "\n";
      }
    }
  }
  if (doc.contains("limit")) {
    const json& lim = doc["limit"];
    os << "m-sweep (" << lim.value("scenario", std::string("?")) << ")\n";
    os << "       m      delta_H  yielded  max|tau|_unyielded  bound    plug\n";
    for (const json& e : lim["entries"]) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "  %6g  %11.4e  %7.4f  %18.6g  %7.4f  %7.4f\n",
                    e.value("m", 0.0), e.value("delta_H", 0.0), e.value("yielded_fraction", 0.0),
                    e.value("max_unyielded_stress", 0.0), e.value("stress_bound", 0.0),
                    e.value("plug_half_width", 0.0));
      os << buf;
    }
    for (const auto& [k, v] : lim["assertions"].items()) {
      os << "  [" << (v.get<bool>() ? "PASS" : "FAIL") << "] " << k << "\n";
    }
  }
  return os.str();
}

void write_fields_csv(const std::filesystem::path& path, const StaggeredField& f, const Grid& g,
                      const FluidParams& p, const RegIndex& r) {
  const TensorField d = compute_strain(f, g);
  const double gm = gamma_m(p, r);
  std::ofstream out = open_out(path);
  out << "x,y,u,v,p,|D|,yielded\n";
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double uc = 0.5 * (f.u(i, j) + f.u(i + 1, j));
      const double vc = 0.5 * (f.v(i, j) + f.v(i, j + 1));
      const double dn = tensor_norm(d(i, j));
      out << num(g.x_center(i)) << ',' << num(g.y_center(j)) << ',' << num(uc) << ',' << num(vc)
          << ',' << num(f.p(i, j)) << ',' << num(dn) << ',' << (dn > gm ? 1 : 0) << '\n';
    }
  }
}

void write_checkpoint(const std::filesystem::path& path, const StaggeredField& f, const Grid& g,
                      double t, double m, const std::string& config_hash) {
  std::ofstream out = open_out(path);
  out << "# t=" << num(t) << " m=" << num(m) << " hash=" << config_hash << " nx=" << g.nx()
      << " ny=" << g.ny() << "\n";
  out << "x,y,u,v,p,i,j,u_face,v_face\n";
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double uc = 0.5 * (f.u(i, j) + f.u(i + 1, j));
      const double vc = 0.5 * (f.v(i, j) + f.v(i, j + 1));
      out << num(g.x_center(i)) << ',' << num(g.y_center(j)) << ',' << num(uc) << ',' << num(vc)
          << ',' << num(f.p(i, j)) << ',' << i << ',' << j << ',' << num(f.u(i, j)) << ','
          << num(f.v(i, j)) << '\n';
    }
  }
}

Checkpoint read_checkpoint(const std::filesystem::path& path, const Grid& g,
                           const BoundarySpec& bc) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
  std::string header;
  std::getline(in, header);
  Checkpoint cp;
  int nx = -1, ny = -1;
  {
    std::istringstream hs(header);
    std::string tok;
    hs >> tok;
    if (tok != "#") throw std::runtime_error("checkpoint header missing in " + path.string());
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
      if (k == "t") cp.t = std::stod(v);
      else if (k == "m") cp.m = std::stod(v);
      else if (k == "hash") cp.config_hash = v;
      else if (k == "nx") nx = std::stoi(v);
      else if (k == "ny") ny = std::stoi(v);
    }
  }
  if (nx != g.nx() || ny != g.ny()) {
    throw std::runtime_error("checkpoint grid " + std::to_string(nx) + "x" + std::to_string(ny) +
                             " does not match the configured grid");
  }
  std::string line;
  std::getline(in, line);  // column names
  cp.state = StaggeredField(g);
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cols;
    while (std::getline(ls, cell, ',')) cols.push_back(cell);
    if (cols.size() != 9) throw std::runtime_error("malformed checkpoint row: " + line);
    const int i = std::stoi(cols[5]), j = std::stoi(cols[6]);
    if (i < 0 || i >= g.nx() || j < 0 || j >= g.ny()) {
      throw std::runtime_error("checkpoint cell index out of range: " + line);
    }
    cp.state.p(i, j) = std::stod(cols[4]);
    cp.state.u(i, j) = std::stod(cols[7]);
    cp.state.v(i, j) = std::stod(cols[8]);
    ++rows;
  }
  if (rows != g.nx() * g.ny()) throw std::runtime_error("checkpoint is missing rows");
  // East and north boundary faces follow from the wall conditions.
  apply_bcs(cp.state, g, bc);
  return cp;
}

}  // namespace bingham
