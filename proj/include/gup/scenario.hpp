#pragma once

// Scenario files, CSV I/O and the simulate / transform runs behind the CLI.
//
// Scenario files are flat `key = value` lines with dotted sections:
//
//   units = natural            # or SI
//   model.kind = NonRelExact1D
//   model.mass = 1
//   model.beta = 0.01          # or model.gamma; both allowed when consistent
//   model.potential = free     # free | harmonic | uniform_field
//   model.stiffness = 1        # harmonic k
//   model.force = 0            # uniform field F
//   model.c = 1                # RelFirstOrder1D; defaults to 1 (natural) or c (SI)
//   model.scale_velocity = ... # EffectiveSquareRoot; derived from gamma when absent
//   model.sign = minus         # EffectiveSquareRoot: minus | plus
//   initial.x = 0              # one or three comma-separated numbers
//   initial.p = 1
//   run.t_end = 1
//   run.dt = 0.01
//   boost.law = exact          # exact | first_order | ordinary | lorentz
//   boost.V = 0.3
//   boost.u = ...              # optional, derived from gamma
//   boost.c_eff = ...          # optional, derived from gamma and c
//   output.trajectory = traj.csv
//   output.events = out.csv
//   output.report = report.json

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gup/constants.hpp"
#include "gup/deformed_algebra.hpp"
#include "gup/dynamics.hpp"
#include "gup/errors.hpp"
#include "gup/event.hpp"
#include "gup/frames.hpp"
#include "gup/legendre_action.hpp"

namespace gup {

// ---------------------------------------------------------------------------
// Number formatting.

/// Shortest decimal string that reads back to the same double.
inline std::string format_double(double value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc{}) return "nan";
  return std::string(buffer, end);
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

/// Strict parse of a finite or infinite double; nullopt on anything else.
inline std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || std::isnan(value)) {
    return std::nullopt;
  }
  return value;
}

// ---------------------------------------------------------------------------
// Scenario configuration.

enum class BoostLaw { Exact, FirstOrder, Ordinary, Lorentz };

constexpr std::string_view to_string(BoostLaw law) noexcept {
  switch (law) {
    case BoostLaw::Exact: return "exact";
    case BoostLaw::FirstOrder: return "first_order";
    case BoostLaw::Ordinary: return "ordinary";
    case BoostLaw::Lorentz: return "lorentz";
  }
  return "?";
}

struct BoostSpec {
  BoostLaw law = BoostLaw::Exact;
  double V = 0.0;
  std::optional<double> u;
  std::optional<double> c_eff;

  friend bool operator==(const BoostSpec&, const BoostSpec&) = default;
};

struct ScenarioConfig {
  UnitSystem units = UnitSystem::Natural;

  Model model = Model::NonRelFirstOrder1D;
  double mass = 1.0;
  std::optional<double> beta;
  std::optional<double> gamma;
  PotentialKind potential = PotentialKind::Free;
  double stiffness = 0.0;
  double force = 0.0;
  std::optional<double> light_speed;
  std::optional<double> scale_velocity;
  RootSign sign = RootSign::Minus;

  std::vector<double> initial_x;
  std::vector<double> initial_p;
  std::optional<double> t_end;
  std::optional<double> dt;

  std::optional<BoostSpec> boost;

  std::string trajectory_path;
  std::string events_path;
  std::string report_path;

  // Derived by resolve_config.
  DeformationParameters params;
  double u = std::numeric_limits<double>::infinity();  ///< effective velocity for the model's geometry
  double c = 1.0;                                       ///< light speed in the active units

  std::size_t dim() const noexcept { return dimension(model); }

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

namespace detail {

inline Model parse_model(std::string_view s, const std::string& key, std::size_t line) {
  for (Model m : {Model::NonRelExact1D, Model::NonRelFirstOrder1D, Model::NonRel3DFirstOrder,
                  Model::NonRel3DExact, Model::RelFirstOrder1D, Model::EffectiveSquareRoot}) {
    if (s == to_string(m)) return m;
  }
  throw ConfigError("unknown model '" + std::string(s) + "'", key, line);
}

inline std::string_view to_string(PotentialKind kind) noexcept {
  switch (kind) {
    case PotentialKind::Free: return "free";
    case PotentialKind::Harmonic: return "harmonic";
    case PotentialKind::UniformField: return "uniform_field";
  }
  return "?";
}

inline std::vector<double> parse_list(std::string_view s, const std::string& key,
                                      std::size_t line) {
  std::vector<double> out;
  while (true) {
    const auto comma = s.find(',');
    const auto item = s.substr(0, comma);
    const auto value = parse_double(item);
    if (!value || !std::isfinite(*value)) {
      throw ConfigError("expected a finite number, got '" + std::string(trim(item)) + "'", key,
                        line);
    }
    out.push_back(*value);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

inline std::string render_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_double(values[i]);
  }
  return out;
}

}  // namespace detail

/// Populates params, u and c from the given fields and validates the scenario.
inline void resolve_config(ScenarioConfig& cfg) {
  if (!(cfg.mass > 0.0) || !std::isfinite(cfg.mass)) {
    throw ConfigError("must be finite and positive", "model.mass");
  }
  if (!cfg.beta && !cfg.gamma) {
    throw ConfigError("one of model.beta or model.gamma is required", "model.beta");
  }
  if (cfg.beta && cfg.gamma) {
    const double expected = *cfg.beta * cfg.mass * cfg.mass;
    const double given = *cfg.gamma * *cfg.gamma;
    if (std::abs(given - expected) > 1e-12 * std::max(std::abs(expected), std::abs(given))) {
      throw ConfigError("conflicts with model.beta: gamma^2 = " + format_double(given) +
                            " but beta m^2 = " + format_double(expected),
                        "model.gamma");
    }
  }
  try {
    cfg.params = cfg.beta ? DeformationParameters::from_beta(*cfg.beta, cfg.mass)
                          : DeformationParameters::from_gamma(*cfg.gamma, cfg.mass);
  } catch (const DomainError& e) {
    throw ConfigError(e.what(), cfg.beta ? "model.beta" : "model.gamma");
  }

  const std::size_t n = cfg.dim();
  cfg.u = n == 3 ? effective_velocity_3d(cfg.params) : effective_velocity_1d(cfg.params);
  cfg.c = cfg.light_speed.value_or(cfg.units == UnitSystem::SI
                                       ? PhysicalConstants::codata2018().c
                                       : 1.0);
  if (!(cfg.c > 0.0) || !std::isfinite(cfg.c)) {
    throw ConfigError("must be finite and positive", "model.c");
  }

  if (!cfg.initial_x.empty() && cfg.initial_x.size() != n) {
    throw ConfigError("expected " + std::to_string(n) + " component(s) for " +
                          std::string(to_string(cfg.model)),
                      "initial.x");
  }
  if (!cfg.initial_p.empty() && cfg.initial_p.size() != n) {
    throw ConfigError("expected " + std::to_string(n) + " component(s) for " +
                          std::string(to_string(cfg.model)),
                      "initial.p");
  }
  if (cfg.t_end && !(*cfg.t_end > 0.0 && std::isfinite(*cfg.t_end))) {
    throw ConfigError("must be finite and positive", "run.t_end");
  }
  if (cfg.dt && !(*cfg.dt > 0.0 && std::isfinite(*cfg.dt))) {
    throw ConfigError("must be finite and positive", "run.dt");
  }
  if (cfg.scale_velocity && !(*cfg.scale_velocity > 0.0)) {
    throw ConfigError("must be positive", "model.scale_velocity");
  }
  if (cfg.boost) {
    if (cfg.boost->u && !(*cfg.boost->u > 0.0)) throw ConfigError("must be positive", "boost.u");
    if (cfg.boost->c_eff && !(*cfg.boost->c_eff > 0.0)) {
      throw ConfigError("must be positive", "boost.c_eff");
    }
  }
}

/// Parses a scenario document. Errors name the line and key.
inline ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig cfg;
  std::map<std::string, std::size_t> seen;
  bool mass_given = false;
  std::optional<BoostLaw> boost_law;
  std::optional<double> boost_v;
  std::optional<double> boost_u;
  std::optional<double> boost_c;

  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto newline = text.find('\n');
    std::string_view raw = text.substr(0, newline);
    text = newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1);

    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    raw = trim(raw);
    if (raw.empty()) continue;

    const auto eq = raw.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("expected 'key = value', got '" + std::string(raw) + "'", {}, line_no);
    }
    const std::string key(trim(raw.substr(0, eq)));
    const std::string_view value = trim(raw.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", {}, line_no);
    if (value.empty()) throw ConfigError("empty value", key, line_no);
    if (auto [it, inserted] = seen.emplace(key, line_no); !inserted) {
      throw ConfigError("duplicate key (first on line " + std::to_string(it->second) + ")", key,
                        line_no);
    }

    auto number = [&]() {
      const auto v = parse_double(value);
      if (!v || !std::isfinite(*v)) {
        throw ConfigError("expected a finite number, got '" + std::string(value) + "'", key,
                          line_no);
      }
      return *v;
    };

    if (key == "units") {
      if (value == "natural") {
        cfg.units = UnitSystem::Natural;
      } else if (value == "SI" || value == "si") {
        cfg.units = UnitSystem::SI;
      } else {
        throw ConfigError("expected natural or SI", key, line_no);
      }
    } else if (key == "model.kind") {
      cfg.model = detail::parse_model(value, key, line_no);
    } else if (key == "model.mass") {
      cfg.mass = number();
      mass_given = true;
    } else if (key == "model.beta") {
      cfg.beta = number();
    } else if (key == "model.gamma") {
      cfg.gamma = number();
    } else if (key == "model.potential") {
      if (value == "free") {
        cfg.potential = PotentialKind::Free;
      } else if (value == "harmonic") {
        cfg.potential = PotentialKind::Harmonic;
      } else if (value == "uniform_field") {
        cfg.potential = PotentialKind::UniformField;
      } else {
        throw ConfigError("expected free, harmonic or uniform_field", key, line_no);
      }
    } else if (key == "model.stiffness") {
      cfg.stiffness = number();
    } else if (key == "model.force") {
      cfg.force = number();
    } else if (key == "model.c") {
      cfg.light_speed = number();
    } else if (key == "model.scale_velocity") {
      cfg.scale_velocity = number();
    } else if (key == "model.sign") {
      if (value == "minus") {
        cfg.sign = RootSign::Minus;
      } else if (value == "plus") {
        cfg.sign = RootSign::Plus;
      } else {
        throw ConfigError("expected plus or minus", key, line_no);
      }
    } else if (key == "initial.x") {
      cfg.initial_x = detail::parse_list(value, key, line_no);
    } else if (key == "initial.p") {
      cfg.initial_p = detail::parse_list(value, key, line_no);
    } else if (key == "run.t_end") {
      cfg.t_end = number();
    } else if (key == "run.dt") {
      cfg.dt = number();
    } else if (key == "boost.law") {
      if (value == "exact") {
        boost_law = BoostLaw::Exact;
      } else if (value == "first_order") {
        boost_law = BoostLaw::FirstOrder;
      } else if (value == "ordinary") {
        boost_law = BoostLaw::Ordinary;
      } else if (value == "lorentz") {
        boost_law = BoostLaw::Lorentz;
      } else {
        throw ConfigError("expected exact, first_order, ordinary or lorentz", key, line_no);
      }
    } else if (key == "boost.V") {
      boost_v = number();
    } else if (key == "boost.u") {
      boost_u = number();
    } else if (key == "boost.c_eff") {
      boost_c = number();
    } else if (key == "output.trajectory") {
      cfg.trajectory_path = std::string(value);
    } else if (key == "output.events") {
      cfg.events_path = std::string(value);
    } else if (key == "output.report") {
      cfg.report_path = std::string(value);
    } else {
      throw ConfigError("unknown key", key, line_no);
    }
  }

  if (!mass_given) throw ConfigError("missing required key", "model.mass");
  if (boost_law || boost_v || boost_u || boost_c) {
    if (!boost_law) throw ConfigError("missing required key", "boost.law");
    if (!boost_v) throw ConfigError("missing required key", "boost.V");
    cfg.boost = BoostSpec{*boost_law, *boost_v, boost_u, boost_c};
  }
  resolve_config(cfg);
  return cfg;
}

/// Inverse of parse_config for the user-supplied fields.
inline std::string render_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "units = " << to_string(cfg.units) << '\n';
  out << "model.kind = " << to_string(cfg.model) << '\n';
  out << "model.mass = " << format_double(cfg.mass) << '\n';
  if (cfg.beta) out << "model.beta = " << format_double(*cfg.beta) << '\n';
  if (cfg.gamma) out << "model.gamma = " << format_double(*cfg.gamma) << '\n';
  out << "model.potential = " << detail::to_string(cfg.potential) << '\n';
  out << "model.stiffness = " << format_double(cfg.stiffness) << '\n';
  out << "model.force = " << format_double(cfg.force) << '\n';
  if (cfg.light_speed) out << "model.c = " << format_double(*cfg.light_speed) << '\n';
  if (cfg.scale_velocity) {
    out << "model.scale_velocity = " << format_double(*cfg.scale_velocity) << '\n';
  }
  out << "model.sign = " << (cfg.sign == RootSign::Minus ? "minus" : "plus") << '\n';
  if (!cfg.initial_x.empty()) out << "initial.x = " << detail::render_list(cfg.initial_x) << '\n';
  if (!cfg.initial_p.empty()) out << "initial.p = " << detail::render_list(cfg.initial_p) << '\n';
  if (cfg.t_end) out << "run.t_end = " << format_double(*cfg.t_end) << '\n';
  if (cfg.dt) out << "run.dt = " << format_double(*cfg.dt) << '\n';
  if (cfg.boost) {
    out << "boost.law = " << to_string(cfg.boost->law) << '\n';
    out << "boost.V = " << format_double(cfg.boost->V) << '\n';
    if (cfg.boost->u) out << "boost.u = " << format_double(*cfg.boost->u) << '\n';
    if (cfg.boost->c_eff) out << "boost.c_eff = " << format_double(*cfg.boost->c_eff) << '\n';
  }
  if (!cfg.trajectory_path.empty()) out << "output.trajectory = " << cfg.trajectory_path << '\n';
  if (!cfg.events_path.empty()) out << "output.events = " << cfg.events_path << '\n';
  if (!cfg.report_path.empty()) out << "output.report = " << cfg.report_path << '\n';
  return out.str();
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

/// The Hamiltonian described by a resolved scenario.
inline HamiltonianKind make_hamiltonian(const ScenarioConfig& cfg) {
  PotentialSpec potential;
  switch (cfg.potential) {
    case PotentialKind::Free: potential = PotentialSpec::free(); break;
    case PotentialKind::Harmonic: potential = PotentialSpec::harmonic(cfg.stiffness); break;
    case PotentialKind::UniformField: potential = PotentialSpec::uniform_field(cfg.force); break;
  }
  switch (cfg.model) {
    case Model::RelFirstOrder1D:
      return HamiltonianKind::rel_first_order_1d(cfg.params, cfg.c, potential);
    case Model::EffectiveSquareRoot: {
      double scale = 0.0;
      if (cfg.scale_velocity) {
        scale = *cfg.scale_velocity;
      } else if (cfg.sign == RootSign::Minus) {
        scale = cfg.u;
      } else {
        scale = effective_light_speed(cfg.params.gamma(), AlgebraGeometry::one_d(), cfg.c);
      }
      if (!std::isfinite(scale)) {
        throw ConfigError("cannot derive a finite velocity scale from gamma = 0",
                          "model.scale_velocity");
      }
      return HamiltonianKind::effective_square_root(
          cfg.params, scale, cfg.sign, potential, cfg.sign == RootSign::Plus ? cfg.c : 0.0);
    }
    default:
      return {cfg.model, cfg.params, potential};
  }
}

// ---------------------------------------------------------------------------
// CSV.

inline void write_trajectory_csv(std::ostream& out, const Trajectory<1>& traj) {
  out << "t,x,p,energy\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << format_double(traj.times[k]) << ',' << format_double(traj.states[k].x[0]) << ','
        << format_double(traj.states[k].p[0]) << ',' << format_double(traj.energies[k]) << '\n';
  }
}

inline void write_trajectory_csv(std::ostream& out, const Trajectory<3>& traj) {
  out << "t,x1,x2,x3,p1,p2,p3,energy\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& s = traj.states[k];
    out << format_double(traj.times[k]);
    for (double v : s.x) out << ',' << format_double(v);
    for (double v : s.p) out << ',' << format_double(v);
    out << ',' << format_double(traj.energies[k]) << '\n';
  }
}

/// Events as read from or written to CSV; `dimension` is 1 or 3.
struct EventTable {
  std::size_t dimension = 1;
  std::vector<Event3D> events;  ///< unused components stay zero in 1D tables
};

inline EventTable read_events_csv(std::istream& in) {
  EventTable table;
  std::string line;
  std::size_t row = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++row;
    const auto content = trim(line);
    if (content.empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest = content;
    while (true) {
      const auto comma = rest.find(',');
      cells.push_back(trim(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!have_header) {
      const bool one = cells.size() == 2 && cells[0] == "t" && (cells[1] == "x1" || cells[1] == "x");
      const bool three = cells.size() == 4 && cells[0] == "t" && cells[1] == "x1" &&
                         cells[2] == "x2" && cells[3] == "x3";
      if (!one && !three) {
        throw ConfigError("events header must be 't,x1' or 't,x1,x2,x3'", "events", row);
      }
      table.dimension = one ? 1 : 3;
      have_header = true;
      continue;
    }
    if (cells.size() != table.dimension + 1) {
      throw ConfigError("expected " + std::to_string(table.dimension + 1) + " columns, got " +
                            std::to_string(cells.size()),
                        "events", row);
    }
    Event3D e;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const auto v = parse_double(cells[i]);
      if (!v || !std::isfinite(*v)) {
        throw ConfigError("malformed number '" + std::string(cells[i]) + "'", "events", row);
      }
      if (i == 0) {
        e.t = *v;
      } else {
        e.x[i - 1] = *v;
      }
    }
    table.events.push_back(e);
  }
  if (!have_header) throw ConfigError("events file is empty", "events");
  return table;
}

inline void write_events_csv(std::ostream& out, const EventTable& table) {
  out << (table.dimension == 1 ? "t,x1\n" : "t,x1,x2,x3\n");
  for (const auto& e : table.events) {
    out << format_double(e.t);
    for (std::size_t i = 0; i < table.dimension; ++i) out << ',' << format_double(e.x[i]);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Runs.

using Json = nlohmann::ordered_json;

namespace detail {

inline Json scenario_echo(const ScenarioConfig& cfg) {
  Json echo = Json::object();
  std::istringstream lines(render_config(cfg));
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find(" = ");
    echo[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return echo;
}

/// JSON cannot carry infinities; they are written as null.
inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json derived_echo(const ScenarioConfig& cfg) {
  return Json{{"beta", cfg.params.beta()},
              {"gamma", cfg.params.gamma()},
              {"u", number_or_null(cfg.u)},
              {"c", cfg.c}};
}

template <std::size_t N>
CanonicalState<N> initial_state(const ScenarioConfig& cfg) {
  CanonicalState<N> s;
  for (std::size_t i = 0; i < N; ++i) {
    s.x[i] = cfg.initial_x.empty() ? 0.0 : cfg.initial_x[i];
    s.p[i] = cfg.initial_p.empty() ? 0.0 : cfg.initial_p[i];
  }
  return s;
}

template <std::size_t N>
Json simulate_impl(const ScenarioConfig& cfg, const HamiltonianKind& kind, std::ostream* csv) {
  const auto traj = integrate(kind, initial_state<N>(cfg), *cfg.t_end, *cfg.dt);
  if (csv) write_trajectory_csv(*csv, traj);
  const auto& end = traj.states.back();
  return Json{{"samples", traj.size()},
              {"steps", traj.size() - 1},
              {"endpoint",
               {{"t", traj.times.back()},
                {"x", std::vector<double>(end.x.begin(), end.x.end())},
                {"p", std::vector<double>(end.p.begin(), end.p.end())}}},
              {"energy_initial", traj.energies.front()},
              {"energy_final", traj.energies.back()},
              {"energy_drift", energy_drift(traj)}};
}

}  // namespace detail

/// Integrates the scenario and writes the trajectory CSV to `csv` when given.
/// Returns the run report.
inline Json run_simulate(const ScenarioConfig& cfg, std::ostream* csv) {
  if (!cfg.t_end) throw ConfigError("missing required key", "run.t_end");
  if (!cfg.dt) throw ConfigError("missing required key", "run.dt");
  const auto start = std::chrono::steady_clock::now();
  const auto kind = make_hamiltonian(cfg);
  Json report;
  report["command"] = "simulate";
  report["scenario"] = detail::scenario_echo(cfg);
  report["derived"] = detail::derived_echo(cfg);
  report["trajectory"] = cfg.dim() == 3 ? detail::simulate_impl<3>(cfg, kind, csv)
                                        : detail::simulate_impl<1>(cfg, kind, csv);
  report["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

/// Transforms every event with the scenario's boost. Returns the transformed
/// table and the run report, which carries the interval-invariance residual over
/// all event pairs for the exact and Lorentz laws.
inline std::pair<EventTable, Json> run_transform(const ScenarioConfig& cfg,
                                                 const EventTable& input) {
  if (!cfg.boost) throw ConfigError("missing boost section", "boost.law");
  const auto start = std::chrono::steady_clock::now();
  const BoostSpec& spec = *cfg.boost;
  const auto geometry = input.dimension == 3 ? AlgebraGeometry::three_d() : AlgebraGeometry::one_d();

  EventTable output{input.dimension, {}};
  output.events.reserve(input.events.size());
  Json boost_echo{{"law", std::string(to_string(spec.law))}, {"V", spec.V}};

  std::optional<double> interval_residual;
  if (spec.law == BoostLaw::Lorentz) {
    double c_eff = 0.0;
    if (spec.c_eff) {
      c_eff = *spec.c_eff;
    } else {
      c_eff = effective_light_speed(cfg.params.gamma(), geometry, cfg.c);
    }
    const auto boost = LorentzBoost::make(spec.V, c_eff);
    boost_echo["c_eff"] = c_eff;
    for (const auto& e : input.events) output.events.push_back(lorentz_apply(boost, e));
    double worst = 0.0;
    for (std::size_t a = 0; a < input.events.size(); ++a) {
      for (std::size_t b = a + 1; b < input.events.size(); ++b) {
        const double before = minkowski_interval(input.events[a], input.events[b], c_eff);
        const double after = minkowski_interval(output.events[a], output.events[b], c_eff);
        const double scale = euclidean_interval(input.events[a], input.events[b], c_eff);
        if (scale > 0.0) worst = std::max(worst, std::abs(after - before) / scale);
      }
    }
    interval_residual = worst;
  } else {
    double u = spec.u.value_or(input.dimension == 3 ? effective_velocity_3d(cfg.params)
                                                    : effective_velocity_1d(cfg.params));
    const GalileanLaw law = spec.law == BoostLaw::Exact        ? GalileanLaw::Exact
                            : spec.law == BoostLaw::FirstOrder ? GalileanLaw::FirstOrder
                                                               : GalileanLaw::Ordinary;
    const auto boost = GalileanBoost::make(spec.V, u, law);
    boost_echo["u"] = detail::number_or_null(u);
    for (const auto& e : input.events) output.events.push_back(galilean_apply(boost, e));
    if (law == GalileanLaw::Exact) {
      double worst = 0.0;
      const double scale_u = std::isfinite(u) ? u : 0.0;
      for (std::size_t a = 0; a < input.events.size(); ++a) {
        for (std::size_t b = a + 1; b < input.events.size(); ++b) {
          const double before = euclidean_interval(input.events[a], input.events[b], scale_u);
          const double after = euclidean_interval(output.events[a], output.events[b], scale_u);
          if (before > 0.0) worst = std::max(worst, std::abs(after - before) / before);
        }
      }
      interval_residual = worst;
    }
  }

  Json report;
  report["command"] = "transform";
  report["scenario"] = detail::scenario_echo(cfg);
  report["derived"] = detail::derived_echo(cfg);
  report["boost"] = boost_echo;
  report["events"] = input.events.size();
  report["interval_residual"] =
      interval_residual ? Json(*interval_residual) : Json(nullptr);
  report["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(output), std::move(report)};
}

/// JSON object reported by the `constants` command.
inline Json constants_report(double mass, const PhysicalConstants& consts) {
  const auto s = effective_scales(mass, consts);
  return Json{
      {"gamma", s.gamma},
      {"c_gamma", s.c_gamma},
      {"u_over_c_1d", s.u_1d / consts.c},
      {"u_over_c_3d", s.u_3d / consts.c},
      {"c_eff_rel_deviation_1d", s.deviation_1d},
      {"c_eff_rel_deviation_3d", s.deviation_3d},
      {"assumptions",
       {{"constants_table", std::string(PhysicalConstants::table_version)},
        {"mass_kg", mass},
        {"c", consts.c},
        {"hbar", consts.hbar},
        {"G", consts.G},
        {"planck_length", consts.l_p},
        {"minimal_length_postulate", "hbar*sqrt(beta) = planck_length for the given mass"},
        {"mass_link", "beta = gamma^2 / m^2"},
        {"u_1d", "u^2 = 3/(8 gamma^2)"},
        {"u_3d", "u^2 = 1/(4 gamma^2)"},
        {"deviation", "first order: (k/2) c^2 gamma^2 with k = 8/3 (1D), 4 (3D)"}}}};
}

}  // namespace gup
