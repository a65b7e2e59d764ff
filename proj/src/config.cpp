#include "bingham/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>

namespace bingham {

namespace {

struct Entry {
  std::string value;
  int line = 0;  ///< 0 for command-line overrides
};

using Entries = std::map<std::string, Entry>;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "scenario", "nx",          "ny",          "lx",         "ly",        "mu",
      "tau_y",    "m",           "m_schedule",  "dt",         "cfl",       "t_end",
      "steady_tol", "picard_tol", "picard_max", "poisson_tol", "lid_speed", "force_gx",
      "out_dir",  "seed",        "warm_start",  "init_amplitude"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Reader {
 public:
  Reader(const Entries& e, std::string source) : e_(e), source_(std::move(source)) {}

  bool has(const std::string& k) const { return e_.count(k) != 0; }
  int line(const std::string& k) const { return has(k) ? e_.at(k).line : 0; }
  [[noreturn]] void fail(const std::string& k, const std::string& what) const {
    throw ConfigError(source_, line(k), k + ": " + what);
  }

  double real(const std::string& k, double def) const {
    if (!has(k)) return def;
    const std::string& v = e_.at(k).value;
    double x = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x)) {
      fail(k, "expected a finite number, got '" + v + "'");
    }
    return x;
  }

  long long integer(const std::string& k, long long def) const {
    if (!has(k)) return def;
    const std::string& v = e_.at(k).value;
    long long x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size()) {
      fail(k, "expected an integer, got '" + v + "'");
    }
    return x;
  }

  std::uint64_t unsigned64(const std::string& k, std::uint64_t def) const {
    if (!has(k)) return def;
    const std::string& v = e_.at(k).value;
    std::uint64_t x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size()) {
      fail(k, "expected a non-negative integer, got '" + v + "'");
    }
    return x;
  }

  bool boolean(const std::string& k, bool def) const {
    if (!has(k)) return def;
    const std::string& v = e_.at(k).value;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    fail(k, "expected true or false, got '" + v + "'");
  }

  std::string text(const std::string& k, const std::string& def) const {
    return has(k) ? e_.at(k).value : def;
  }

  std::vector<double> list(const std::string& k) const {
    std::vector<double> out;
    std::stringstream ss(e_.at(k).value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      double x = 0.0;
      const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
      if (item.empty() || ec != std::errc() || p != item.data() + item.size()) {
        fail(k, "expected a comma-separated list of numbers");
      }
      out.push_back(x);
    }
    return out;
  }

  /// Run f, turning invariant violations into errors at the key's line.
  template <class F>
  auto guard(const std::string& k, F&& f) const -> decltype(f()) {
    try {
      return f();
    } catch (const std::invalid_argument& ex) {
      fail(k, ex.what());
    }
  }

 private:
  const Entries& e_;
  std::string source_;
};

void put(Entries& e, const std::string& raw, int line, const std::string& source) {
  const auto eq = raw.find('=');
  if (eq == std::string::npos) {
    throw ConfigError(source, line, "expected 'key = value', got '" + trim(raw) + "'");
  }
  const std::string key = trim(raw.substr(0, eq));
  const std::string value = trim(raw.substr(eq + 1));
  if (key.empty()) throw ConfigError(source, line, "missing key");
  if (known_keys().count(key) == 0) throw ConfigError(source, line, "unknown key '" + key + "'");
  if (value.empty()) throw ConfigError(source, line, key + ": missing value");
  if (line > 0 && e.count(key) != 0) {
    throw ConfigError(source, line,
                      "duplicate key '" + key + "' (first on line " +
                          std::to_string(e.at(key).line) + ")");
  }
  e[key] = {value, line};
}

RunConfig build(const Entries& e, const std::string& source) {
  const Reader rd(e, source);
  RunConfig c;

  const std::string kind_name = rd.text("scenario", "channel");
  const ScenarioKind kind =
      rd.guard("scenario", [&] { return scenario_kind_from_string(kind_name); });

  // Scenario-dependent geometry defaults.
  const bool channel = kind == ScenarioKind::Channel;
  const int nx = static_cast<int>(rd.integer("nx", channel ? 16 : 32));
  const int ny = static_cast<int>(rd.integer("ny", channel ? 64 : 32));
  const double lx = rd.real("lx", 1.0);
  const double ly = rd.real("ly", channel ? 2.0 : 1.0);
  const Grid grid = rd.guard(rd.has("nx") ? "nx" : "ny", [&] { return Grid(nx, ny, lx, ly); });

  const double mu = rd.real("mu", 1.0);
  const double tau_y = rd.real("tau_y", 0.5);
  c.fluid = rd.guard(rd.has("mu") ? "mu" : "tau_y", [&] { return FluidParams(mu, tau_y); });

  if (rd.has("m") && rd.has("m_schedule")) {
    rd.fail("m_schedule", "give either m or m_schedule, not both");
  }
  if (rd.has("m_schedule")) {
    c.has_schedule = true;
    c.schedule.values = rd.list("m_schedule");
    rd.guard("m_schedule", [&] {
      c.schedule.validate();
      return 0;
    });
    c.solve.m = RegIndex(c.schedule.values.back());
  } else {
    const double m = rd.real("m", 64.0);
    c.solve.m = rd.guard("m", [&] { return RegIndex(m); });
  }
  c.schedule.warm_start = rd.boolean("warm_start", true);

  if (rd.has("dt") && rd.has("cfl")) rd.fail("cfl", "give either dt or cfl, not both");
  if (rd.has("cfl")) {
    c.solve.cfl = rd.real("cfl", 0.5);
  } else {
    c.solve.dt = rd.real("dt", channel ? 0.05 : 0.01);
  }
  c.solve.t_end = rd.real("t_end", 20.0);
  c.solve.steady_tol = rd.real("steady_tol", 1e-6);
  c.solve.picard_tol = rd.real("picard_tol", 1e-8);
  c.solve.picard_max = static_cast<int>(rd.integer("picard_max", 1000));
  c.solve.poisson_tol = rd.real("poisson_tol", 1e-10);
  try {
    c.solve.validate();
  } catch (const std::invalid_argument& ex) {
    // Attribute to the first offending key we can identify.
    for (const char* k : {"dt", "cfl", "t_end", "steady_tol", "picard_tol", "picard_max",
                          "poisson_tol"}) {
      const std::string msg = ex.what();
      if (msg.rfind(k, 0) == 0) rd.fail(k, msg);
    }
    throw ConfigError(source, 0, ex.what());
  }

  c.out_dir = rd.text("out_dir", ".");
  c.seed = rd.unsigned64("seed", 12345);

  Scenario& s = c.scenario;
  s.kind = kind;
  s.grid = grid;
  const double lid = rd.real("lid_speed", kind == ScenarioKind::Cavity ? 1.0 : 0.0);
  const double g = rd.real("force_gx", channel ? 1.0 : 0.0);
  const double amp = rd.real("init_amplitude", kind == ScenarioKind::Decay ? 0.5 : 0.0);
  s.seed = c.seed;
  switch (kind) {
    case ScenarioKind::Channel:
      s.boundary = BoundarySpec::periodic_channel();
      break;
    case ScenarioKind::Cavity:
      s.boundary = BoundarySpec::lid_driven(lid);
      break;
    case ScenarioKind::Decay:
      s.boundary = BoundarySpec::no_slip_box();
      break;
  }
  s.force_gx = g;
  s.lid_speed = lid;
  s.init_amplitude = amp;
  rd.guard("scenario", [&] {
    s.validate();
    return 0;
  });
  return c;
}

Entries read_entries(std::istream& in, const std::string& source) {
  Entries e;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    if (trim(raw).empty()) continue;
    put(e, raw, line, source);
  }
  return e;
}

void apply_overrides(Entries& e, const std::vector<std::string>& overrides) {
  for (const std::string& o : overrides) put(e, o, 0, "--override");
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& what)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " +
                         what),
      line_(line) {}

bool operator==(const RunConfig& a, const RunConfig& b) { return serialize(a) == serialize(b); }

RunConfig parse_config_text(const std::string& text, const std::string& source,
                            const std::vector<std::string>& overrides) {
  std::istringstream in(text);
  Entries e = read_entries(in, source);
  apply_overrides(e, overrides);
  return build(e, source);
}

RunConfig parse_config(const std::filesystem::path& path,
                       const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
  Entries e = read_entries(in, path.string());
  apply_overrides(e, overrides);
  return build(e, path.string());
}

RunConfig default_config(const std::vector<std::string>& overrides) {
  Entries e;
  apply_overrides(e, overrides);
  return build(e, "<defaults>");
}

std::string serialize(const RunConfig& c) {
  std::ostringstream os;
  const Scenario& s = c.scenario;
  os << "scenario = " << to_string(s.kind) << "\n";
  os << "nx = " << s.grid.nx() << "\n";
  os << "ny = " << s.grid.ny() << "\n";
  os << "lx = " << num(s.grid.lx()) << "\n";
  os << "ly = " << num(s.grid.ly()) << "\n";
  os << "mu = " << num(c.fluid.mu()) << "\n";
  os << "tau_y = " << num(c.fluid.tau_y()) << "\n";
  if (c.has_schedule) {
    os << "m_schedule = ";
    for (std::size_t k = 0; k < c.schedule.values.size(); ++k) {
      os << (k ? ", " : "") << num(c.schedule.values[k]);
    }
    os << "\n";
  } else {
    os << "m = " << num(c.solve.m.m()) << "\n";
  }
  os << "warm_start = " << (c.schedule.warm_start ? "true" : "false") << "\n";
  if (c.solve.dt) os << "dt = " << num(*c.solve.dt) << "\n";
  if (c.solve.cfl) os << "cfl = " << num(*c.solve.cfl) << "\n";
  os << "t_end = " << num(c.solve.t_end) << "\n";
  os << "steady_tol = " << num(c.solve.steady_tol) << "\n";
  os << "picard_tol = " << num(c.solve.picard_tol) << "\n";
  os << "picard_max = " << c.solve.picard_max << "\n";
  os << "poisson_tol = " << num(c.solve.poisson_tol) << "\n";
  os << "lid_speed = " << num(s.lid_speed) << "\n";
  os << "force_gx = " << num(s.force_gx) << "\n";
  os << "init_amplitude = " << num(s.init_amplitude) << "\n";
  os << "out_dir = " << c.out_dir << "\n";
  os << "seed = " << c.seed << "\n";
  return os.str();
}

std::map<std::string, std::string> config_echo(const RunConfig& c) {
  std::map<std::string, std::string> out;
  std::istringstream in(serialize(c));
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

std::string config_hash(const RunConfig& c) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : serialize(c)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace bingham
