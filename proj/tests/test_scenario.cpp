#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "gup/scenario.hpp"

using namespace gup;

namespace {

const char* kMinimal =
    "model.kind = NonRelExact1D\n"
    "model.mass = 1\n"
    "model.beta = 0.01\n"
    "initial.x = 0\n"
    "initial.p = 1\n"
    "run.t_end = 1\n"
    "run.dt = 0.01\n";

ConfigError config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no ConfigError for:\n" << text;
  return ConfigError("none");
}

std::string without_wall_time(Json report) {
  report.erase("wall_time_s");
  return report.dump();
}

EventTable events(const std::string& csv) {
  std::istringstream in(csv);
  return read_events_csv(in);
}

}  // namespace

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-2.5e-300), "-2.5e-300");
  const double x = 1.0134474588712058;
  EXPECT_EQ(*parse_double(format_double(x)), x);
  EXPECT_FALSE(parse_double("1.0abc"));
  EXPECT_FALSE(parse_double(""));
}

TEST(ParseConfig, MinimalConfigDerivesU) {
  const auto cfg = parse_config(kMinimal);
  EXPECT_EQ(cfg.model, Model::NonRelExact1D);
  EXPECT_DOUBLE_EQ(cfg.params.gamma(), 0.1);
  EXPECT_DOUBLE_EQ(cfg.u * cfg.u, 37.5);
  EXPECT_EQ(cfg.c, 1.0);
}

TEST(ParseConfig, GammaOnlyDerivesBeta) {
  const auto cfg = parse_config("model.kind = NonRel3DExact\nmodel.mass = 2\nmodel.gamma = 0.2\n");
  EXPECT_DOUBLE_EQ(cfg.params.beta(), 0.01);
  EXPECT_DOUBLE_EQ(cfg.u, 2.5);
}

TEST(ParseConfig, InconsistentBetaAndGammaConflict) {
  const auto e = config_error("model.mass = 1\nmodel.beta = 0.01\nmodel.gamma = 0.2\n");
  EXPECT_EQ(e.key(), "model.gamma");
  EXPECT_NO_THROW(parse_config("model.mass = 2\nmodel.beta = 0.01\nmodel.gamma = 0.2\n"));
}

TEST(ParseConfig, ValidationErrorsNameTheKey) {
  EXPECT_EQ(config_error(std::string(kMinimal).replace(std::string(kMinimal).find("run.dt = 0.01"),
                                                       13, "run.dt = 0"))
                .key(),
            "run.dt");
  EXPECT_EQ(config_error("model.mass = 1\nmodel.beta = 0.01\nrun.dt = -1\n").key(), "run.dt");
  EXPECT_EQ(config_error("model.mass = 1\n").key(), "model.beta");
  EXPECT_EQ(config_error("model.beta = 0.01\n").key(), "model.mass");
  EXPECT_EQ(config_error("model.mass = 1\nmodel.beta = -1\n").key(), "model.beta");
  EXPECT_EQ(config_error("model.mass = 1\nmodel.beta = 0.1\ninitial.p = 1, 2\n").key(), "initial.p");
  EXPECT_EQ(config_error("model.mass = 1\nmodel.beta = 0.1\nboost.V = 1\n").key(), "boost.law");
}

TEST(ParseConfig, ParseErrorsCarryLineAndKey) {
  auto e = config_error("model.mass = 1\nmodel.beta = 0.01\nmodel.beta = 0.02\n");
  EXPECT_EQ(e.line(), 3u);
  EXPECT_EQ(e.key(), "model.beta");
  e = config_error("# comment\nmodel.mass 1\n");
  EXPECT_EQ(e.line(), 2u);
  e = config_error("model.mass = 1\nmodel.beta = abc\n");
  EXPECT_EQ(e.line(), 2u);
  EXPECT_EQ(e.key(), "model.beta");
  e = config_error("model.mass = 1\nmodel.beta = nan\n");
  EXPECT_EQ(e.key(), "model.beta");
  e = config_error("model.mass = 1\nmodel.bta = 0.1\n");
  EXPECT_EQ(e.key(), "model.bta");
  e = config_error("model.mass = 1\nmodel.beta = 0.1\nmodel.kind = Exact\n");
  EXPECT_EQ(e.key(), "model.kind");
  EXPECT_EQ(e.line(), 3u);
}

TEST(ParseConfig, UnitsSelectDefaultLightSpeed) {
  const auto si = parse_config("units = SI\nmodel.mass = 1\nmodel.beta = 0\n");
  EXPECT_EQ(si.c, 299792458.0);
  const auto explicit_c = parse_config("units = SI\nmodel.mass = 1\nmodel.beta = 0\nmodel.c = 3\n");
  EXPECT_EQ(explicit_c.c, 3.0);
}

TEST(ParseConfig, RenderRoundTrip) {
  EXPECT_EQ(parse_config(render_config(parse_config(kMinimal))), parse_config(kMinimal));

  const char* full =
      "units = SI\n"
      "model.kind = EffectiveSquareRoot\n"
      "model.mass = 0.3\n"
      "model.gamma = 0.07\n"
      "model.potential = uniform_field\n"
      "model.force = -1.25\n"
      "model.scale_velocity = 4\n"
      "model.sign = plus\n"
      "model.c = 10\n"
      "initial.x = 0.1\n"
      "initial.p = -0.2\n"
      "run.t_end = 2\n"
      "run.dt = 0.001\n"
      "boost.law = lorentz\n"
      "boost.V = 0.5\n"
      "boost.c_eff = 1.5\n"
      "output.trajectory = a.csv\n"
      "output.events = b.csv\n"
      "output.report = c.json\n";
  const auto cfg = parse_config(full);
  EXPECT_EQ(parse_config(render_config(cfg)), cfg);
}

TEST(ParseConfig, RenderRoundTripRandomized) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const char* models[] = {"NonRelExact1D", "NonRelFirstOrder1D", "NonRel3DFirstOrder",
                          "NonRel3DExact", "RelFirstOrder1D",    "EffectiveSquareRoot"};
  const char* laws[] = {"exact", "first_order", "ordinary", "lorentz"};
  for (int k = 0; k < 200; ++k) {
    const std::string model = models[k % 6];
    const bool three = model.find("3D") != std::string::npos;
    auto number = [&] { return format_double(std::ldexp(unit(rng), static_cast<int>(rng() % 40) - 20)); };
    auto vec = [&] { return three ? number() + ", -" + number() + ", " + number() : number(); };
    std::string text = "model.kind = " + model + "\nmodel.mass = " + number() + "\n";
    text += (k % 2 ? "model.beta = " : "model.gamma = ") + number() + "\n";
    text += "model.potential = harmonic\nmodel.stiffness = " + number() + "\n";
    if (model == "EffectiveSquareRoot") text += "model.scale_velocity = " + number() + "\n";
    text += "initial.x = " + vec() + "\ninitial.p = " + vec() + "\n";
    text += "run.t_end = " + number() + "\nrun.dt = " + number() + "\n";
    if (k % 3 == 0) text += std::string("boost.law = ") + laws[k % 4] + "\nboost.V = -" + number() + "\n";
    const auto cfg = parse_config(text);
    EXPECT_EQ(parse_config(render_config(cfg)), cfg) << text;
  }
}

TEST(RunSimulate, FreeParticleCsv) {
  const auto cfg = parse_config(kMinimal);
  std::ostringstream csv;
  const auto report = run_simulate(cfg, &csv);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "t,x,p,energy");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_NE(line.find(",1,"), std::string::npos) << line;
  }
  EXPECT_EQ(rows, 101);
  EXPECT_EQ(report["trajectory"]["steps"], 100);
  EXPECT_NEAR(report["trajectory"]["endpoint"]["x"][0].get<double>(), 1.0134474588712058, 1e-13);
  EXPECT_EQ(report["trajectory"]["energy_drift"], 0.0);
  EXPECT_TRUE(report.contains("wall_time_s"));
}

TEST(RunSimulate, HarmonicPeriod) {
  const auto cfg = parse_config(
      "model.kind = NonRelFirstOrder1D\nmodel.mass = 1\nmodel.beta = 0\n"
      "model.potential = harmonic\nmodel.stiffness = 1\ninitial.x = 1\ninitial.p = 0\n"
      "run.t_end = 6.283185307179586\nrun.dt = 0.001\n");
  const auto report = run_simulate(cfg, nullptr);
  EXPECT_NEAR(report["trajectory"]["endpoint"]["x"][0].get<double>(), 1.0, 1e-6);
  EXPECT_NEAR(report["trajectory"]["endpoint"]["p"][0].get<double>(), 0.0, 1e-6);
}

TEST(RunSimulate, Deterministic) {
  const auto cfg = parse_config(
      "model.kind = NonRel3DExact\nmodel.mass = 1\nmodel.gamma = 0.1\nmodel.potential = harmonic\n"
      "model.stiffness = 1\ninitial.x = 1, 0, 0\ninitial.p = 0, 1, 0.5\nrun.t_end = 2\nrun.dt = 0.01\n");
  std::ostringstream a;
  std::ostringstream b;
  const auto ra = run_simulate(cfg, &a);
  const auto rb = run_simulate(cfg, &b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(without_wall_time(ra), without_wall_time(rb));
}

TEST(RunSimulate, MissingRunKeysAndDomainExit) {
  EXPECT_THROW(run_simulate(parse_config("model.mass = 1\nmodel.beta = 0.1\n"), nullptr), ConfigError);
  const auto cfg = parse_config(
      "model.kind = NonRelExact1D\nmodel.mass = 1\nmodel.beta = 1\nmodel.potential = uniform_field\n"
      "model.force = 1\ninitial.p = 0\nrun.t_end = 3\nrun.dt = 0.01\n");
  EXPECT_THROW(run_simulate(cfg, nullptr), IntegrationDomainError);
}

TEST(ReadEvents, HeadersAndErrors) {
  EXPECT_EQ(events("t,x\n1,2\n").events.size(), 1u);
  const auto three = events("t,x1,x2,x3\n1,2,3,4\n\n");
  EXPECT_EQ(three.dimension, 3u);
  EXPECT_EQ(three.events[0].x[2], 4.0);
  try {
    events("t,x1\n0,1\n2,abc\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    events("t,x1\n0,1\n0,1,2\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(events("a,b\n"), ConfigError);
  EXPECT_THROW(events(""), ConfigError);
}

TEST(RunTransform, ZeroVelocityReproducesInput) {
  const std::string csv = "t,x1\n0,1\n0.1,-2.5\n3,1e-300\n";
  const auto cfg = parse_config("model.mass = 1\nmodel.beta = 0.01\nboost.law = exact\nboost.V = 0\n");
  const auto [out, report] = run_transform(cfg, events(csv));
  std::ostringstream written;
  write_events_csv(written, out);
  EXPECT_EQ(written.str(), csv);
  EXPECT_EQ(report["interval_residual"], 0.0);
}

TEST(RunTransform, ExactAndLorentzExamples) {
  const auto exact = parse_config(
      "model.mass = 1\nmodel.beta = 0.01\nboost.law = exact\nboost.V = 1\nboost.u = 1\n");
  const auto [a, ra] = run_transform(exact, events("t,x1\n0,1\n"));
  EXPECT_NEAR(a.events[0].t, -0.70710678118654752, 1e-15);
  EXPECT_NEAR(a.events[0].x[0], 0.70710678118654752, 1e-15);

  const auto lorentz = parse_config(
      "model.mass = 1\nmodel.beta = 0.01\nboost.law = lorentz\nboost.V = 0.6\nboost.c_eff = 1\n");
  const auto [b, rb] = run_transform(lorentz, events("t,x1\n0,1\n2,-1\n"));
  EXPECT_NEAR(b.events[0].t, 0.75, 1e-15);
  EXPECT_NEAR(b.events[0].x[0], 1.25, 1e-15);
  EXPECT_LT(rb["interval_residual"].get<double>(), 1e-15);

  const auto fast = parse_config(
      "model.mass = 1\nmodel.beta = 0.01\nboost.law = lorentz\nboost.V = 1\nboost.c_eff = 1\n");
  EXPECT_THROW(run_transform(fast, events("t,x1\n0,1\n")), SuperluminalBoostError);
}

TEST(RunTransform, DerivedScalesWhenOmitted) {
  const auto cfg = parse_config("model.mass = 1\nmodel.beta = 0.01\nboost.law = exact\nboost.V = 2\n");
  const auto [out, report] = run_transform(cfg, events("t,x1,x2,x3\n1,0,5,6\n"));
  EXPECT_DOUBLE_EQ(report["boost"]["u"].get<double>(), 5.0);
  EXPECT_EQ(out.events[0].x[1], 5.0);
  EXPECT_TRUE(report["interval_residual"].is_number());

  const auto lorentz = parse_config(
      "model.mass = 1\nmodel.gamma = 0.1\nboost.law = lorentz\nboost.V = 0.5\n");
  const auto [o2, r2] = run_transform(lorentz, events("t,x1\n1,0\n"));
  EXPECT_NEAR(r2["boost"]["c_eff"].get<double>(), 1.0 / std::sqrt(1.0 - 8.0 / 3.0 * 0.01), 1e-15);

  const auto ordinary = parse_config(
      "model.mass = 1\nmodel.beta = 0.01\nboost.law = ordinary\nboost.V = 2\n");
  EXPECT_TRUE(run_transform(ordinary, events("t,x1\n1,0\n")).second["interval_residual"].is_null());
}

TEST(ConstantsReport, Fields) {
  const auto consts = PhysicalConstants::codata2018();
  const auto report = constants_report(consts.m_e, consts);
  EXPECT_NEAR(report["c_gamma"].get<double>() / 4.1854622147319578e-23, 1.0, 1e-14);
  EXPECT_EQ(report["assumptions"]["constants_table"], "CODATA-2018");
}
