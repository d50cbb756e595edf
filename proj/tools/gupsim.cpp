// gupsim: scenario runs, constants report and invariant checks.
//
// Exit codes: 0 success, 1 check failure, 2 usage or parse error,
// 3 numeric-domain error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gup/checks.hpp"
#include "gup/scenario.hpp"

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

// GUP_UNITS, when set, replaces the units given in the scenario file.
void apply_units_override(gup::ScenarioConfig& cfg) {
  const char* env = std::getenv("GUP_UNITS");
  if (!env || !*env) return;
  const std::string value(env);
  if (value == "natural") {
    cfg.units = gup::UnitSystem::Natural;
  } else if (value == "SI" || value == "si") {
    cfg.units = gup::UnitSystem::SI;
  } else {
    throw gup::ConfigError("expected natural or SI, got '" + value + "'", "GUP_UNITS");
  }
  gup::resolve_config(cfg);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw gup::ConfigError("cannot open '" + path + "' for writing");
  return out;
}

// The report goes to its configured path; otherwise to stdout, or to stderr
// when stdout already carries CSV data.
void emit_report(const gup::Json& report, const std::string& path, bool stdout_busy) {
  const std::string text = report.dump(2) + "\n";
  if (!path.empty()) {
    open_output(path) << text;
  } else {
    (stdout_busy ? std::cerr : std::cout) << text;
  }
}

int simulate(const std::string& config_path, std::string csv_path, std::string report_path) {
  auto cfg = gup::load_config(config_path);
  apply_units_override(cfg);
  if (csv_path.empty()) csv_path = cfg.trajectory_path;
  if (report_path.empty()) report_path = cfg.report_path;

  gup::Json report;
  if (csv_path.empty()) {
    report = gup::run_simulate(cfg, &std::cout);
  } else {
    auto out = open_output(csv_path);
    report = gup::run_simulate(cfg, &out);
  }
  emit_report(report, report_path, csv_path.empty());
  return 0;
}

int transform(const std::string& config_path, const std::string& events_path,
              std::string csv_path, std::string report_path) {
  auto cfg = gup::load_config(config_path);
  apply_units_override(cfg);
  if (csv_path.empty()) csv_path = cfg.events_path;
  if (report_path.empty()) report_path = cfg.report_path;

  std::ifstream in(events_path);
  if (!in) throw gup::ConfigError("cannot open events file '" + events_path + "'");
  const auto input = gup::read_events_csv(in);
  const auto [output, report] = gup::run_transform(cfg, input);
  if (csv_path.empty()) {
    gup::write_events_csv(std::cout, output);
  } else {
    auto out = open_output(csv_path);
    gup::write_events_csv(out, output);
  }
  emit_report(report, report_path, csv_path.empty());
  return 0;
}

int constants(double mass) {
  const auto consts = gup::PhysicalConstants::codata2018();
  std::cout << gup::constants_report(mass, consts).dump(2) << '\n';
  return 0;
}

int check(const std::string& suite, const gup::checks::CheckOptions& options,
          const std::string& report_path) {
  const auto start = std::chrono::steady_clock::now();
  const auto results = gup::checks::run_suite(suite, options);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto& r : results) {
    std::cerr << (r.passed ? "PASS " : "FAIL ") << r.suite << ": " << r.name << "  measured "
              << gup::format_double(r.measured)
              << (r.comparison == gup::checks::Comparison::AtMost ? " <= " : " >= ")
              << gup::format_double(r.threshold) << '\n';
  }
  emit_report(gup::checks::check_report(suite, options, results, wall), report_path, false);
  return gup::checks::failure_count(results) == 0 ? 0 : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical dynamics with a minimal-length deformed algebra"};
  app.require_subcommand(1);

  std::string config_path;
  std::string events_path;
  std::string csv_path;
  std::string report_path;

  auto* sim = app.add_subcommand("simulate", "Integrate a scenario and write its trajectory CSV");
  sim->add_option("--config", config_path, "Scenario file")->required();
  sim->add_option("--output", csv_path, "Trajectory CSV (default: output.trajectory or stdout)");
  sim->add_option("--report", report_path, "JSON report (default: output.report)");

  auto* tr = app.add_subcommand("transform", "Map an event table through the scenario's boost");
  tr->add_option("--config", config_path, "Scenario file")->required();
  tr->add_option("--events", events_path, "Input event CSV")->required();
  tr->add_option("--output", csv_path, "Output event CSV (default: output.events or stdout)");
  tr->add_option("--report", report_path, "JSON report (default: output.report)");

  double mass = gup::PhysicalConstants::codata2018().m_e;
  auto* cs = app.add_subcommand("constants", "Derived scales for a body of the given mass (SI)");
  cs->add_option("--mass", mass, "Mass in kg (default: electron mass)")
      ->check(CLI::PositiveNumber);

  std::string suite = "all";
  gup::checks::CheckOptions options;
  auto* ck = app.add_subcommand("check", "Run invariant suites");
  ck->add_option("--suite", suite, "algebra, dynamics, legendre, frames, constants or all")
      ->check(CLI::IsMember({"algebra", "dynamics", "legendre", "frames", "constants", "all"}));
  ck->add_option("--seed", options.seed, "Seed for random states");
  ck->add_option("--tolerance-scale", options.tolerance_scale,
                 "Multiplier applied to every tolerance")
      ->check(CLI::NonNegativeNumber);
  ck->add_option("--report", report_path, "JSON report (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sim) return simulate(config_path, csv_path, report_path);
    if (*tr) return transform(config_path, events_path, csv_path, report_path);
    if (*cs) return constants(mass);
    if (*ck) return check(suite, options, report_path);
  } catch (const gup::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const gup::DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
