// bingham: run, sweep, verify and report entry points.
//
// Exit codes: 0 success with every hard assertion passing, 1 assertion
// failure, 2 usage or configuration error.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bingham/config.hpp"
#include "bingham/continuation.hpp"
#include "bingham/diagnostics.hpp"
#include "bingham/operators.hpp"
#include "bingham/report_io.hpp"
#include "bingham/verify.hpp"

namespace fs = std::filesystem;
using namespace bingham;

namespace {

constexpr int kOk = 0;
constexpr int kAssertFail = 1;
constexpr int kUsage = 2;

struct Common {
  std::string config;
  std::string out;
  std::vector<std::string> overrides;
  bool quiet = false;
};

RunConfig load(const Common& c) {
  RunConfig rc = c.config.empty() ? default_config(c.overrides)
                                  : parse_config(c.config, c.overrides);
  if (!c.out.empty()) rc.out_dir = c.out;
  return rc;
}

std::string tag_for(const RunConfig& rc, double m) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_m%g", to_string(rc.scenario.kind).c_str(), m);
  return buf;
}

int finish(const RunReport& rep, bool quiet) {
  const bool ok = rep.all_assertions_pass();
  if (!quiet) std::cout << (ok ? "all assertions passed\n" : "assertion failure\n");
  return ok ? kOk : kAssertFail;
}

int cmd_run(const Common& c) {
  const RunConfig rc = load(c);
  const Scenario& s = rc.scenario;
  const FlowSolver solver(s.grid, s.boundary, rc.fluid, rc.solve, s.forcing());
  const auto t0 = std::chrono::steady_clock::now();
  RunOptions opts;
  opts.record_history = true;
  RunResult run = solver.run_to_steady(s.initial_state(), opts);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  RunReport& rep = run.report;
  rep.config = config_echo(rc);
  rep.scalars["wall_seconds"] = wall;
  apriori_tracker(run.history, solver).append_to(rep);
  const int stride = std::max(1, static_cast<int>(run.history.size() / 10));
  rep.ledgers = energy_ledgers(run.history, solver, stride);
  bool coercive = true;
  for (const EnergyLedger& l : rep.ledgers) coercive = coercive && l.dissipation >= l.coercive_floor;
  rep.assertions["coercive_dissipation"] = coercive;
  if (s.kind == ScenarioKind::Channel) {
    rep.scalars["profile_error_vs_oracle"] = channel_profile_error(run.state, s, rc.fluid, rc.solve.m);
    rep.scalars["plug_half_width"] = detect_plug_half_width(run.state, s, rc.fluid, rc.solve.m);
    rep.scalars["oracle_plug_half_width"] =
        channel_plug_half_width(s.force_gx, s.half_width(), rc.fluid, rc.solve.m);
  }

  const fs::path dir(rc.out_dir);
  fs::create_directories(dir);
  const std::string tag = tag_for(rc, rc.solve.m.m());
  write_fields_csv(dir / ("fields_" + tag + ".csv"), run.state, s.grid, rc.fluid, rc.solve.m);
  write_checkpoint(dir / ("checkpoint_" + tag + ".csv"), run.state, s.grid, run.t, rc.solve.m.m(),
                   config_hash(rc));
  write_report_json(dir / "report.json", rep);
  if (!c.quiet) {
    std::cout << "run " << tag << ": " << run.steps << " steps, t = " << run.t
              << (run.reached_steady ? " (steady)" : " (t_end reached)") << ", "
              << wall << " s\n";
    std::cout << summarize_report(read_report_json(dir / "report.json"));
    std::cout << "wrote " << (dir / ("fields_" + tag + ".csv")).string() << " and "
              << (dir / "report.json").string() << "\n";
  }
  return finish(rep, c.quiet);
}

int cmd_sweep(const Common& c) {
  const RunConfig rc = load(c);
  const Scenario& s = rc.scenario;
  const LimitReport lim = run_m_sweep(s, rc.fluid, rc.schedule, rc.solve);
  RunReport rep;
  rep.config = config_echo(rc);
  for (const LimitEntry& e : lim.entries) {
    rep.push("m", e.m);
    rep.push("delta_H", e.delta_H);
  }
  for (const auto& [k, v] : lim.assertions()) rep.assertions[k] = v;
  rep.scalars["sup_H_spread"] = lim.sup_H_spread();
  rep.scalars["int_V2_spread"] = lim.int_V2_spread();

  const fs::path dir(rc.out_dir);
  fs::create_directories(dir);
  for (const LimitEntry& e : lim.entries) {
    write_fields_csv(dir / ("fields_" + tag_for(rc, e.m) + ".csv"), e.state, s.grid, rc.fluid,
                     RegIndex(e.m));
  }
  write_report_json(dir / "report.json", rep, lim);
  if (!c.quiet) std::cout << summarize_report(read_report_json(dir / "report.json"));
  return finish(rep, c.quiet);
}

int cmd_verify(const Common& c, long pairs, std::uint64_t seed) {
  SuiteOptions opt;
  opt.pairs = pairs;
  opt.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<CheckResult> all = constitutive_property_suite(opt);
  const std::vector<CheckResult> oracles = oracle_checks(opt);
  all.insert(all.end(), oracles.begin(), oracles.end());
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool ok = true;
  for (const CheckResult& r : all) ok = ok && r.passed;
  if (!c.quiet) {
    std::cout << "constitutive property suite: " << pairs << " pairs, seed " << seed << "\n";
    std::cout << format_checks(all);
    std::printf("%s in %.2f s\n", ok ? "all checks passed" : "check failure", wall);
  }
  return ok ? kOk : kAssertFail;
}

int cmd_report(const Common& c, const std::string& path) {
  fs::path p = path;
  if (p.empty()) p = fs::path(c.out.empty() ? "." : c.out) / "report.json";
  const nlohmann::json doc = read_report_json(p);
  if (!c.quiet) std::cout << summarize_report(doc);
  bool ok = true;
  for (const char* section : {"run", "limit"}) {
    if (doc.contains(section) && doc[section].contains("assertions")) {
      for (const auto& [k, v] : doc[section]["assertions"].items()) ok = ok && v.get<bool>();
    }
  }
  return ok ? kOk : kAssertFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized Bingham flow solver and verification suite"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "config file (key = value lines)");
    sub->add_option("--out", common.out, "output directory (overrides out_dir)");
    sub->add_option("--override", common.overrides, "key=value, repeatable")->allow_extra_args(false);
    sub->add_flag("--quiet", common.quiet, "suppress stdout summary");
  };
  CLI::App* run = app.add_subcommand("run", "single solve to steady state with report");
  CLI::App* sweep = app.add_subcommand("sweep", "continuation over the m schedule");
  CLI::App* verify = app.add_subcommand("verify", "constitutive property suite and oracle checks");
  CLI::App* report = app.add_subcommand("report", "re-emit the summary of a saved report");
  for (CLI::App* sub : {run, sweep, verify, report}) add_common(sub);
  long pairs = 200000;
  std::uint64_t seed = 20240611;
  verify->add_option("--pairs", pairs, "number of random tensor pairs")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "suite seed");
  std::string report_path;
  report->add_option("--report", report_path, "report.json path (default <out>/report.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsage;
  }

  try {
    if (*run) return cmd_run(common);
    if (*sweep) return cmd_sweep(common);
    if (*verify) return cmd_verify(common, pairs, seed);
    if (*report) return cmd_report(common, report_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kAssertFail;
  }
  return kUsage;
}
