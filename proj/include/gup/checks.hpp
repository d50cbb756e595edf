#pragma once

// Invariant suites run by `gupsim check`. Each item reports the measured
// quantity next to the threshold it was compared against.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "gup/constants.hpp"
#include "gup/deformed_algebra.hpp"
#include "gup/dynamics.hpp"
#include "gup/frames.hpp"
#include "gup/legendre_action.hpp"
#include "gup/scenario.hpp"

namespace gup::checks {

enum class Comparison { AtMost, AtLeast };

struct CheckResult {
  std::string suite;
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  Comparison comparison = Comparison::AtMost;
  bool passed = false;
};

/// Settings shared by every suite. tolerance_scale < 1 tightens every threshold;
/// 0 makes every check fail, which the harness uses to test itself.
struct CheckOptions {
  std::uint64_t seed = 42;
  double tolerance_scale = 1.0;
};

class Recorder {
 public:
  Recorder(std::string suite, const CheckOptions& options, std::vector<CheckResult>& out)
      : suite_(std::move(suite)), options_(options), out_(out) {}

  void at_most(std::string name, double measured, double tolerance) {
    const double t = tolerance * options_.tolerance_scale;
    out_.push_back({suite_, std::move(name), measured, t, Comparison::AtMost, measured <= t});
  }

  void at_least(std::string name, double measured, double bound) {
    const double b = options_.tolerance_scale > 0.0 ? bound / options_.tolerance_scale
                                                    : std::numeric_limits<double>::infinity();
    out_.push_back({suite_, std::move(name), measured, b, Comparison::AtLeast, measured >= b});
  }

  /// |ratio / expected - 1| <= band.
  void ratio(std::string name, double ratio, double expected, double band) {
    at_most(std::move(name) + " (ratio " + format_double(ratio) + ", expected " +
                format_double(expected) + ")",
            std::abs(ratio / expected - 1.0), band);
  }

  void holds(std::string name, bool condition) { at_most(std::move(name), condition ? 0.0 : 1.0, 0.5); }

 private:
  std::string suite_;
  const CheckOptions& options_;
  std::vector<CheckResult>& out_;
};

namespace detail {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vec3 random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vec3 v{normal(rng), normal(rng), normal(rng)};
  const double n = std::sqrt(norm2(v));
  return {v[0] / n, v[1] / n, v[2] / n};
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline void algebra_suite(const CheckOptions& options, std::vector<CheckResult>& out) {
  Recorder rec("algebra", options, out);
  std::mt19937_64 rng(options.seed);
  const FiniteDifference fd;

  double worst_1d = 0.0;
  double worst_1d_over_tol = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto params = DeformationParameters::from_beta(detail::uniform(rng, 1e-3, 0.5), 1.0);
    const double p = detail::uniform(rng, -1.2, 1.2) / std::sqrt(params.beta());
    const auto state = make_state(detail::uniform(rng, -5.0, 5.0), p);
    const double numeric =
        numerical_bracket(deformed_position_1d(), deformed_momentum_1d(params), state);
    const double exact = bracket_xp_1d(momentum_map_1d(p, params), params);
    const double h = fd.step(p);
    const double rel = std::abs(numeric - exact) / exact;
    worst_1d = std::max(worst_1d, rel);
    worst_1d_over_tol = std::max(worst_1d_over_tol, rel / (10.0 * h * h));
  }
  rec.at_most("1D {X,P} = 1 + beta P^2, error in units of 10 h^2", worst_1d_over_tol, 1.0);
  rec.at_most("1D {X,P} = 1 + beta P^2, relative error", worst_1d, 1e-8);

  double worst_3d = 0.0;
  double worst_vanishing = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto params = DeformationParameters::from_beta(detail::uniform(rng, 1e-3, 0.5), 1.0);
    const double magnitude = std::sqrt(detail::uniform(rng, 0.0, 0.8) / params.beta());
    const Vec3 dir = detail::random_direction(rng);
    CanonicalState3D s;
    for (int i = 0; i < 3; ++i) {
      s.x[i] = detail::uniform(rng, -5.0, 5.0);
      s.p[i] = magnitude * dir[i];
    }
    const Vec3 P = momentum_map_3d(s.p, params);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        const double numeric = numerical_bracket(deformed_position_3d(i),
                                                 deformed_momentum_3d(j, params), s);
        const double exact = bracket_xp_3d(P, i, j, params);
        worst_3d = std::max(worst_3d, std::abs(numeric - exact) / std::max(1.0, std::abs(exact)));
        worst_vanishing = std::max(
            {worst_vanishing,
             std::abs(numerical_bracket(deformed_position_3d(i), deformed_position_3d(j), s)),
             std::abs(numerical_bracket(deformed_momentum_3d(i, params),
                                        deformed_momentum_3d(j, params), s))});
      }
    }
  }
  rec.at_most("3D {X_i,P_j} componentwise", worst_3d, 1e-8);
  rec.at_most("3D {X_i,X_j} and {P_i,P_j} vanish", worst_vanishing, 1e-8);

  // beta -> 0 limit.
  double worst_bound = 0.0;
  double worst_halving = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double beta = detail::uniform(rng, 1e-4, 0.1);
    const double p = detail::uniform(rng, 0.05, 0.5) / std::sqrt(beta);
    const auto full = DeformationParameters::from_beta(beta, 1.0);
    const auto half = DeformationParameters::from_beta(0.5 * beta, 1.0);
    const double dev = std::abs(momentum_map_1d(p, full) - p);
    const double dev_half = std::abs(momentum_map_1d(p, half) - p);
    worst_bound = std::max(worst_bound, dev / (beta * p * p * p));
    worst_halving = std::max(worst_halving, std::abs(dev / dev_half / 2.0 - 1.0));
  }
  rec.at_most("|P - p| <= beta |p|^3 (max ratio)", worst_bound, 1.0);
  rec.at_most("halving beta halves |P - p| (relative miss)", worst_halving, 0.10);

  // Antisymmetry and Leibniz on generic smooth functions.
  const PhaseFunction<1> f = [](const CanonicalState1D& s) {
    return std::sin(s.x[0]) * s.p[0] + s.x[0] * s.x[0];
  };
  const PhaseFunction<1> g = [](const CanonicalState1D& s) {
    return std::exp(0.3 * s.p[0]) + s.x[0] * s.p[0] * s.p[0];
  };
  const PhaseFunction<1> h = [](const CanonicalState1D& s) {
    return std::cos(s.x[0] + 0.5 * s.p[0]);
  };
  const PhaseFunction<1> fg = [&](const CanonicalState1D& s) { return f(s) * g(s); };
  double worst_anti = 0.0;
  double worst_leibniz = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto s = make_state(detail::uniform(rng, -2.0, 2.0), detail::uniform(rng, -2.0, 2.0));
    const double fg_h = numerical_bracket(f, g, s);
    const double gf_h = numerical_bracket(g, f, s);
    worst_anti = std::max(worst_anti, std::abs(fg_h + gf_h));
    const double lhs = numerical_bracket(fg, h, s);
    const double rhs = f(s) * numerical_bracket(g, h, s) + g(s) * numerical_bracket(f, h, s);
    const double step = fd.step(std::max(std::abs(s.x[0]), std::abs(s.p[0])));
    worst_leibniz = std::max(worst_leibniz,
                             std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)) /
                                 (10.0 * step * step));
  }
  rec.at_most("antisymmetry {f,g} + {g,f}", worst_anti, 1e-13);
  rec.at_most("Leibniz rule, error in units of 10 h^2", worst_leibniz, 1.0);

  // Monotone branch.
  {
    const auto params = DeformationParameters::from_beta(0.04, 1.0);
    const double limit = tan_branch_limit(params);
    double previous = -std::numeric_limits<double>::infinity();
    bool increasing = true;
    for (int k = -999; k <= 999; ++k) {
      const double value = momentum_map_1d(limit * k / 1000.0, params);
      increasing = increasing && value > previous;
      previous = value;
    }
    rec.holds("momentum_map_1d strictly increasing on its branch", increasing);
  }

  // Jacobi identity through nested brackets.
  double worst_jacobi_1d = 0.0;
  double worst_jacobi_3d = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto params = DeformationParameters::from_beta(detail::uniform(rng, 1e-3, 0.3), 1.0);
    const auto X = deformed_position_1d();
    const auto P = deformed_momentum_1d(params);
    const PhaseFunction<1> XP = [X, P](const CanonicalState1D& s) { return X(s) * P(s); };
    const auto s = make_state(detail::uniform(rng, -2.0, 2.0),
                              detail::uniform(rng, -1.0, 1.0) / std::sqrt(params.beta()));
    worst_jacobi_1d = std::max(worst_jacobi_1d, jacobi_residual(X, P, XP, s));

    const double magnitude = std::sqrt(detail::uniform(rng, 0.0, 0.6) / params.beta());
    const Vec3 dir = detail::random_direction(rng);
    CanonicalState3D s3;
    for (int i = 0; i < 3; ++i) {
      s3.x[i] = detail::uniform(rng, -2.0, 2.0);
      s3.p[i] = magnitude * dir[i];
    }
    const auto X1 = deformed_position_3d(0);
    const auto P1 = deformed_momentum_3d(0, params);
    const auto P2 = deformed_momentum_3d(1, params);
    const PhaseFunction<3> X2P3 = [params](const CanonicalState3D& st) {
      return st.x[1] * momentum_map_3d(st.p, params)[2];
    };
    worst_jacobi_3d = std::max({worst_jacobi_3d, jacobi_residual(X1, P1, P2, s3),
                                jacobi_residual(X1, P2, X2P3, s3)});
  }
  rec.at_most("Jacobi residual, 1D representation", worst_jacobi_1d, 1e-5);
  rec.at_most("Jacobi residual, 3D representation", worst_jacobi_3d, 1e-5);
}

// ---------------------------------------------------------------------------

namespace detail {

/// Endpoint error of an RK4 run against a run at 1/32 of the step.
template <std::size_t N>
double endpoint_error(const HamiltonianKind& kind, const CanonicalState<N>& start, double t_end,
                      double dt) {
  const auto a = integrate(kind, start, t_end, dt).states.back();
  const auto ref = integrate(kind, start, t_end, dt / 32.0).states.back();
  double worst = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    worst = std::max({worst, std::abs(a.x[i] - ref.x[i]), std::abs(a.p[i] - ref.p[i])});
  }
  return worst;
}

}  // namespace detail

inline void dynamics_suite(const CheckOptions& options, std::vector<CheckResult>& out) {
  Recorder rec("dynamics", options, out);
  std::mt19937_64 rng(options.seed + 1);

  // Exact vs first-order 1D energy, O(beta^2).
  {
    const double p = 1.0;
    auto gap = [p](double beta) {
      const auto params = DeformationParameters::from_beta(beta, 1.0);
      const auto s = make_state(0.0, p);
      return std::abs(hamiltonian_value(HamiltonianKind::nonrel_exact_1d(params), s) -
                      hamiltonian_value(HamiltonianKind::nonrel_first_order_1d(params), s));
    };
    rec.ratio("exact vs first-order H gap, beta halving", gap(0.02) / gap(0.01), 4.0, 0.20);
    rec.at_most("exact vs first-order H gap / (beta^2 p^6 / m)", gap(0.01) / (1e-4), 1.0);
  }

  // Square-root model with sign minus against the first-order model.
  {
    auto gap = [](double beta) {
      const auto params = DeformationParameters::from_beta(beta, 1.0);
      const double u = effective_velocity_1d(params);
      const auto s = make_state(0.0, 1.0);
      return std::abs(
          hamiltonian_value(
              HamiltonianKind::effective_square_root(params, u, RootSign::Minus), s) -
          hamiltonian_value(HamiltonianKind::nonrel_first_order_1d(params), s));
    };
    rec.ratio("square-root(u, -) vs first-order gap, beta halving", gap(0.02) / gap(0.01), 4.0,
              0.20);
  }

  // Finite-difference vs analytic right-hand side.
  {
    double worst = 0.0;
    const auto potential = PotentialSpec::harmonic(0.7);
    for (int k = 0; k < 100; ++k) {
      const auto params = DeformationParameters::from_beta(detail::uniform(rng, 1e-3, 0.2), 1.3);
      const double root_beta = std::sqrt(params.beta());
      const double x = detail::uniform(rng, -2.0, 2.0);
      const auto check1 = [&](const HamiltonianKind& kind, double p) {
        const auto s = make_state(x, p);
        const auto a = hamilton_rhs(kind, s);
        const auto n = hamilton_rhs_numeric(kind, s);
        worst = std::max({worst, std::abs(a.x[0] - n.x[0]) / std::max(1.0, std::abs(a.x[0])),
                          std::abs(a.p[0] - n.p[0]) / std::max(1.0, std::abs(a.p[0]))});
      };
      check1(HamiltonianKind::nonrel_exact_1d(params, potential),
             detail::uniform(rng, -1.2, 1.2) / root_beta);
      check1(HamiltonianKind::nonrel_first_order_1d(params, potential),
             detail::uniform(rng, -3.0, 3.0));
      check1(HamiltonianKind::rel_first_order_1d(params, 2.0, potential),
             detail::uniform(rng, -1.0, 1.0));
      const double u = effective_velocity_1d(params);
      check1(HamiltonianKind::effective_square_root(params, u, RootSign::Minus, potential),
             detail::uniform(rng, -0.9, 0.9) * params.mass() * u);
      check1(HamiltonianKind::effective_square_root(params, u, RootSign::Plus, potential),
             detail::uniform(rng, -3.0, 3.0));

      CanonicalState3D s3;
      const Vec3 dir = detail::random_direction(rng);
      const double magnitude = std::sqrt(detail::uniform(rng, 0.0, 0.8) / params.beta());
      for (int i = 0; i < 3; ++i) {
        s3.x[i] = detail::uniform(rng, -2.0, 2.0);
        s3.p[i] = magnitude * dir[i];
      }
      for (const auto& kind : {HamiltonianKind::nonrel_3d_exact(params, potential),
                               HamiltonianKind::nonrel_3d_first_order(params, potential)}) {
        const auto a = hamilton_rhs(kind, s3);
        const auto n = hamilton_rhs_numeric(kind, s3);
        for (int i = 0; i < 3; ++i) {
          worst = std::max({worst, std::abs(a.x[i] - n.x[i]) / std::max(1.0, std::abs(a.x[i])),
                            std::abs(a.p[i] - n.p[i]) / std::max(1.0, std::abs(a.p[i]))});
        }
      }
    }
    rec.at_most("finite-difference vs analytic Hamilton RHS", worst, 1e-6);
  }

  // RK4 convergence order and energy conservation.
  {
    const auto params = DeformationParameters::from_beta(0.01, 1.0);
    const auto kind = HamiltonianKind::nonrel_exact_1d(params, PotentialSpec::harmonic(1.0));
    const auto start = make_state(1.0, 0.0);
    const double e1 = detail::endpoint_error(kind, start, 10.0, 0.1);
    const double e2 = detail::endpoint_error(kind, start, 10.0, 0.05);
    rec.ratio("RK4 endpoint error, dt halving", e1 / e2, 16.0, 0.25);
    const auto traj = integrate(kind, start, 10.0, 1e-3);
    rec.at_most("harmonic energy drift, dt = 1e-3, 1e4 steps", energy_drift(traj), 1e-8);
  }

  // Free momentum constant.
  {
    const auto params = DeformationParameters::from_beta(0.01, 1.0);
    const auto traj = integrate(HamiltonianKind::nonrel_exact_1d(params), make_state(0.0, 1.0),
                                1.0, 1e-3);
    double worst = 0.0;
    for (const auto& s : traj.states) worst = std::max(worst, std::abs(s.p[0] - 1.0));
    rec.at_most("free particle momentum constant", worst, 1e-12);
    rec.at_most("free particle energy drift", energy_drift(traj), 1e-13);
  }

  // Relativistic quartic coefficient changes sign at beta = 3/(8 m^2 c^2).
  {
    const double m = 1.0;
    const double c = 2.0;
    const double threshold = 3.0 / (8.0 * m * m * c * c);
    const auto below = HamiltonianKind::rel_first_order_1d(
        DeformationParameters::from_beta(0.9 * threshold, m), c);
    const auto above = HamiltonianKind::rel_first_order_1d(
        DeformationParameters::from_beta(1.1 * threshold, m), c);
    const double expected = -(1.0 / (8.0 * m * m * c * c) - 0.9 * threshold / 3.0) / m;
    // Quartic coefficient read off the energy: (H(p) - mc^2 - p^2/2m) / p^4.
    const double p = 2.0;
    const double measured =
        (hamiltonian_value(below, make_state(0.0, p)) - m * c * c - p * p / (2.0 * m)) /
        (p * p * p * p);
    rec.at_most("relativistic quartic coefficient", std::abs(measured - expected) / std::abs(expected),
                1e-12);
    rec.holds("quartic coefficient flips sign across beta = 3/(8 m^2 c^2)",
              relativistic_quartic_coefficient(below) > 0.0 &&
                  relativistic_quartic_coefficient(above) < 0.0);
  }
}

// ---------------------------------------------------------------------------

inline void legendre_suite(const CheckOptions& options, std::vector<CheckResult>& out) {
  Recorder rec("legendre", options, out);
  std::mt19937_64 rng(options.seed + 2);

  {
    double worst = 0.0;
    const auto params = DeformationParameters::from_beta(0.05, 1.0);
    const double u = effective_velocity_1d(params);
    const double rb = std::sqrt(params.beta());
    const std::vector<std::pair<HamiltonianKind, double>> kinds = {
        {HamiltonianKind::nonrel_exact_1d(params), 1.4 / rb},
        {HamiltonianKind::nonrel_first_order_1d(params), 10.0},
        {HamiltonianKind::rel_first_order_1d(params, 1.0),
         std::min(10.0, 0.95 * monotone_branch_limit(
                                   HamiltonianKind::rel_first_order_1d(params, 1.0)))},
        {HamiltonianKind::effective_square_root(params, u, RootSign::Minus), 0.95 * u},
        {HamiltonianKind::effective_square_root(params, u, RootSign::Plus), 10.0},
    };
    for (const auto& [kind, p_max] : kinds) {
      for (int k = 0; k < 100; ++k) {
        const double p = detail::uniform(rng, -p_max, p_max);
        const double v = velocity(kind, Vec<1>{p})[0];
        const double back = momentum_from_velocity_exact(v, kind);
        worst = std::max(worst, std::abs(back - p) / std::max(1.0, std::abs(p)));
      }
    }
    for (const auto& kind :
         {HamiltonianKind::nonrel_3d_exact(params), HamiltonianKind::nonrel_3d_first_order(params)}) {
      for (int k = 0; k < 100; ++k) {
        const Vec3 dir = detail::random_direction(rng);
        const double magnitude = std::sqrt(detail::uniform(rng, 0.0, 0.9) / params.beta());
        const Vec3 p{magnitude * dir[0], magnitude * dir[1], magnitude * dir[2]};
        const Vec3 back = momentum_from_velocity_exact(velocity(kind, p), kind);
        for (int i = 0; i < 3; ++i) {
          worst = std::max(worst, std::abs(back[i] - p[i]) / std::max(1.0, magnitude));
        }
      }
    }
    rec.at_most("exact inversion round trip p -> v -> p", worst, 1e-10);
  }

  {
    const double v = 0.5;
    auto gap = [v](double beta) {
      const auto params = DeformationParameters::from_beta(beta, 1.0);
      return std::abs(momentum_from_velocity_exact(v, HamiltonianKind::nonrel_exact_1d(params)) -
                      momentum_from_velocity_first_order(v, params));
    };
    rec.ratio("exact vs first-order inversion gap, beta halving", gap(0.01) / gap(0.005), 4.0, 0.20);
    auto gap3 = [](double beta) {
      const auto params = DeformationParameters::from_beta(beta, 1.0);
      const Vec3 v{0.3, -0.2, 0.1};
      const Vec3 a = momentum_from_velocity_exact(v, HamiltonianKind::nonrel_3d_exact(params));
      const Vec3 b = momentum_from_velocity_first_order(v, params);
      return std::sqrt(norm2(Vec3{a[0] - b[0], a[1] - b[1], a[2] - b[2]}));
    };
    rec.ratio("3D exact vs first-order inversion gap, beta halving", gap3(0.02) / gap3(0.01), 4.0,
              0.20);
  }

  {
    const auto params = DeformationParameters::from_beta(0.01, 1.0);
    const auto undeformed = DeformationParameters::from_beta(0.0, 1.0);
    const double v = 0.7;
    const bool lowers_l =
        lagrangian_value(LagrangianKind::first_order_1d(params), 0.0, v) <
        lagrangian_value(LagrangianKind::first_order_1d(undeformed), 0.0, v);
    const bool raises_h =
        hamiltonian_value(HamiltonianKind::nonrel_first_order_1d(params), make_state(0.0, v)) >
        hamiltonian_value(HamiltonianKind::nonrel_first_order_1d(undeformed), make_state(0.0, v));
    // The relativistic correction has the opposite sign.
    const bool relativistic_opposite =
        lagrangian_value(LagrangianKind::relativistic(undeformed, 5.0), 0.0, v) + 5.0 * 5.0 >
        lagrangian_value(LagrangianKind::first_order_1d(undeformed), 0.0, v);
    rec.holds("beta term lowers L and raises H; 1/c^2 term does the opposite",
              lowers_l && raises_h && relativistic_opposite);
  }

  {
    const auto params = DeformationParameters::from_beta(0.01, 1.0);
    const auto hkind = HamiltonianKind::nonrel_first_order_1d(params, PotentialSpec::harmonic(1.0));
    const auto lkind = LagrangianKind::first_order_1d(params, PotentialSpec::harmonic(1.0));
    const auto traj = integrate(hkind, make_state(1.0, 0.2), 3.0, 1e-2);
    const auto whole = path_from_trajectory(hkind, traj);
    const std::size_t cut = traj.size() / 3;
    auto slice = [&](std::size_t a, std::size_t b) {
      return make_path_sample<1>({whole.times.begin() + a, whole.times.begin() + b + 1},
                                 {whole.positions.begin() + a, whole.positions.begin() + b + 1},
                                 {whole.velocities.begin() + a, whole.velocities.begin() + b + 1});
    };
    const double total = action_along_path(lkind, whole);
    const double parts = action_along_path(lkind, slice(0, cut)) +
                         action_along_path(lkind, slice(cut, traj.size() - 1));
    rec.at_most("action additivity over concatenated paths", std::abs(total - parts), 1e-13);
  }

  {
    const auto params = DeformationParameters::from_beta(0.01, 1.0);
    const double u = effective_velocity_1d(params);
    const double V = 2.0;
    const double T = 3.0;
    std::vector<double> ts;
    std::vector<Vec<1>> xs;
    for (int k = 0; k <= 30; ++k) {
      ts.push_back(T * k / 30.0);
      xs.push_back({V * ts.back()});
    }
    const auto path = make_path_sample<1>(ts, xs);
    const auto lkind = LagrangianKind::square_root_1d(params, u);
    const double action = action_along_path(lkind, path);
    const double geometric = params.mass() * u * euclidean_arc_length(path, u) -
                             params.mass() * u * u * T;
    rec.at_most("free action = m u (Euclidean arc length) - m u^2 T",
                std::abs(action - geometric) / std::abs(geometric), 1e-10);
  }

  {
    double worst = 0.0;
    const auto params = DeformationParameters::from_beta(0.01, 1.0);
    const auto kind = HamiltonianKind::nonrel_exact_1d(params, PotentialSpec::harmonic(1.0));
    for (int k = 0; k < 50; ++k) {
      const double v = detail::uniform(rng, -3.0, 3.0);
      worst = std::max(worst, legendre_roundtrip_residual(kind, Vec<1>{v},
                                                          Vec<1>{detail::uniform(rng, -1, 1)}));
    }
    rec.at_most("L + H - v p with the definitional pair", worst, 1e-12);
  }
}

// ---------------------------------------------------------------------------

inline void frames_suite(const CheckOptions& options, std::vector<CheckResult>& out) {
  Recorder rec("frames", options, out);
  std::mt19937_64 rng(options.seed + 3);

  {
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double u = std::exp(detail::uniform(rng, -2.0, 2.0));
      const double V = detail::uniform(rng, -10.0, 10.0) * u;
      const auto boost = GalileanBoost::make(V, u);
      Event3D a{detail::uniform(rng, -5, 5), {detail::uniform(rng, -5, 5),
                                              detail::uniform(rng, -5, 5),
                                              detail::uniform(rng, -5, 5)}};
      Event3D b{detail::uniform(rng, -5, 5), {detail::uniform(rng, -5, 5),
                                              detail::uniform(rng, -5, 5),
                                              detail::uniform(rng, -5, 5)}};
      const double before = euclidean_interval(a, b, u);
      const double after = euclidean_interval(galilean_apply(boost, a), galilean_apply(boost, b), u);
      worst = std::max(worst, std::abs(after - before) / before);
    }
    rec.at_most("Euclidean interval invariance, |V|/u <= 10", worst, 1e-12);
  }

  {
    std::vector<Event1D> events;
    for (int k = 0; k < 50; ++k) {
      events.push_back({detail::uniform(rng, -1, 1), {detail::uniform(rng, -1, 1)}});
    }
    auto deviation = [&](double V, double u) {
      double worst = 0.0;
      const auto exact = GalileanBoost::make(V, u, GalileanLaw::Exact);
      const auto first = GalileanBoost::make(V, u, GalileanLaw::FirstOrder);
      for (const auto& e : events) {
        const auto a = galilean_apply(exact, e);
        const auto b = galilean_apply(first, e);
        worst = std::max({worst, std::abs(a.t - b.t), std::abs(a.x[0] - b.x[0])});
      }
      return worst;
    };
    const double d1 = deviation(0.1, 1.0);
    const double d2 = deviation(0.05, 1.0);
    const double d4 = deviation(0.025, 1.0);
    rec.ratio("exact vs first-order law, V -> V/2", d1 / d2, 16.0, 0.25);
    rec.ratio("exact vs first-order law, V/2 -> V/4", d2 / d4, 16.0, 0.25);
    // At fixed V the gap is second order in 1/u^2, i.e. in beta.
    rec.ratio("exact vs first-order law, 1/u^2 halved at fixed V",
              deviation(0.1, 1.0) / deviation(0.1, std::sqrt(2.0)), 4.0, 0.20);
  }

  {
    const double u = 1.7;
    double worst_assoc = 0.0;
    double worst_inverse = 0.0;
    double worst_identity = 0.0;
    double worst_compose = 0.0;
    for (int k = 0; k < 200; ++k) {
      // Keep every partial angle sum below pi/2 so the composed boost is the rotation itself.
      const double a1 = detail::uniform(rng, -0.5, 0.5);
      const double a2 = detail::uniform(rng, -0.5, 0.5);
      const double a3 = detail::uniform(rng, -0.5, 0.5);
      const auto b1 = GalileanBoost::make(u * std::tan(a1), u);
      const auto b2 = GalileanBoost::make(u * std::tan(a2), u);
      const auto b3 = GalileanBoost::make(u * std::tan(a3), u);
      const auto left = galilean_compose(galilean_compose(b1, b2), b3);
      const auto right = galilean_compose(b1, galilean_compose(b2, b3));
      worst_assoc = std::max(worst_assoc, std::abs(left.V - right.V) / u);
      const Event1D e{detail::uniform(rng, -3, 3), {detail::uniform(rng, -3, 3)}};
      const auto back = galilean_apply(galilean_inverse(b1), galilean_apply(b1, e));
      worst_inverse = std::max({worst_inverse, std::abs(back.t - e.t), std::abs(back.x[0] - e.x[0])});
      const auto id = galilean_apply(GalileanBoost::make(0.0, u), e);
      worst_identity = std::max({worst_identity, std::abs(id.t - e.t), std::abs(id.x[0] - e.x[0])});
      const auto one = galilean_apply(galilean_compose(b1, b2), e);
      const auto two = galilean_apply(b1, galilean_apply(b2, e));
      worst_compose =
          std::max({worst_compose, std::abs(one.t - two.t), std::abs(one.x[0] - two.x[0])});
    }
    rec.at_most("composition associative", worst_assoc, 1e-13);
    rec.at_most("inverse boost undoes boost", worst_inverse, 1e-13);
    rec.at_most("V = 0 is the identity", worst_identity, 0.0);
    rec.at_most("composed boost equals successive boosts", worst_compose, 1e-13);
  }

  {
    double worst = 0.0;
    bool rejected = true;
    for (int k = 0; k < 1000; ++k) {
      const double c = std::exp(detail::uniform(rng, -2.0, 2.0));
      const double V = detail::uniform(rng, -0.99, 0.99) * c;
      const auto boost = LorentzBoost::make(V, c);
      Event1D a{detail::uniform(rng, -5, 5), {detail::uniform(rng, -5, 5)}};
      Event1D b{detail::uniform(rng, -5, 5), {detail::uniform(rng, -5, 5)}};
      const double before = minkowski_interval(a, b, c);
      const double after = minkowski_interval(lorentz_apply(boost, a), lorentz_apply(boost, b), c);
      worst = std::max(worst, std::abs(after - before) / euclidean_interval(a, b, c));
      try {
        (void)LorentzBoost::make((1.0 + detail::uniform(rng, 0.0, 2.0)) * c, c);
        rejected = false;
      } catch (const SuperluminalBoostError&) {
      }
    }
    rec.at_most("Lorentz interval with c_eff invariant", worst, 1e-12);
    rec.holds("boosts with |V| >= c_eff rejected", rejected);
  }

  {
    const double u = 1.0;
    const auto boost = GalileanBoost::make(10.0 * u, u);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const Event1D e{detail::uniform(rng, -3, 3), {detail::uniform(rng, -3, 3)}};
      const auto back = galilean_apply(galilean_inverse(boost), galilean_apply(boost, e));
      worst = std::max({worst, std::abs(back.t - e.t), std::abs(back.x[0] - e.x[0])});
    }
    rec.at_most("V = 10 u boost is invertible", worst, 1e-13);
  }

  {
    const auto params = DeformationParameters::from_beta(0.01, 1.0);
    const auto kind = HamiltonianKind::nonrel_exact_1d(params);
    const double u = effective_velocity_1d(params);
    const auto start = make_state(0.0, 1.0);
    const auto exact = covariance_residual(kind, GalileanBoost::make(0.3 * u, u), start, 5.0, 1e-2);
    rec.at_most("free motion stays linear under the exact boost", exact.linearity, 1e-10);
    rec.at_most("boosted slope matches tangent addition", exact.slope_error, 1e-10);
    const auto control = covariance_residual(
        kind, GalileanBoost::make(0.3 * u, u, GalileanLaw::Ordinary), start, 5.0, 1e-2);
    rec.at_least("ordinary-law control residual", control.residual(), 1e-4);
  }
}

// ---------------------------------------------------------------------------

inline void constants_suite(const CheckOptions& options, std::vector<CheckResult>& out) {
  Recorder rec("constants", options, out);
  using Extended = boost::multiprecision::cpp_bin_float_100;

  const auto consts = PhysicalConstants::codata2018();
  const auto scales = effective_scales(consts.m_e, consts);
  rec.at_most("c gamma vs 4.2e-23 (relative)", std::abs(scales.c_gamma / 4.2e-23 - 1.0), 0.02);
  rec.at_most("u/c (3D) vs 1.2e22 (relative)", std::abs(scales.u_3d / consts.c / 1.2e22 - 1.0),
              0.05);
  rec.at_most("(c_eff - c)/c (3D) vs 3.5e-45 (relative)",
              std::abs(scales.deviation_3d / 3.5e-45 - 1.0), 0.05);

  {
    // Build each body from beta = gamma^2/m^2 so gamma is re-derived through the mass.
    const double gamma = scales.gamma;
    double spread = 0.0;
    for (double m : {consts.m_e, 1.0, 1e-27, 5.97e24}) {
      const auto params = DeformationParameters::from_beta((gamma / m) * (gamma / m), m);
      const double u = effective_velocity_3d(params);
      const double deviation = light_speed_deviation(params.gamma(), AlgebraGeometry::three_d(), consts.c);
      spread = std::max({spread, std::abs(u / scales.u_3d - 1.0),
                         std::abs(deviation / scales.deviation_3d - 1.0)});
    }
    rec.at_most("u and (c_eff - c)/c independent of the body mass at fixed gamma (relative)", spread,
                1e-12);
  }

  for (const auto& [label, geometry] :
       {std::pair{"1D", AlgebraGeometry::one_d()}, std::pair{"3D", AlgebraGeometry::three_d()}}) {
    const Extended c(consts.c);
    const Extended gamma(scales.gamma);
    const Extended c_eff = effective_light_speed<Extended>(gamma, geometry, c);
    const Extended exact_deviation = (c_eff - c) / c;
    const double closed = light_speed_deviation(scales.gamma, geometry, consts.c);
    rec.holds(std::string("c_eff > c (") + label + ")", c_eff > c);
    rec.at_most(std::string("closed-form deviation vs extended-precision (c_eff - c)/c (") +
                    label + ")",
                static_cast<double>(abs(Extended(closed) - exact_deviation) / exact_deviation),
                1e-6);
    const Extended inverse_exact = (c * c) / (c_eff * c_eff);
    const Extended expansion = Extended(1) - 2 * exact_deviation;
    rec.at_most(std::string("c^2/c_eff^2 vs 1 - 2 deviation (") + label + ")",
                static_cast<double>(abs(inverse_exact - expansion) / inverse_exact), 1e-20);
  }
}

// ---------------------------------------------------------------------------

inline const std::vector<std::string_view>& suite_names() {
  static const std::vector<std::string_view> names{"algebra", "dynamics", "legendre", "frames",
                                                   "constants"};
  return names;
}

/// Runs one suite by name, or every suite for "all". Unknown names throw ConfigError.
inline std::vector<CheckResult> run_suite(std::string_view suite, const CheckOptions& options) {
  std::vector<CheckResult> results;
  const std::vector<std::pair<std::string_view,
                              std::function<void(const CheckOptions&, std::vector<CheckResult>&)>>>
      table{{"algebra", algebra_suite},
            {"dynamics", dynamics_suite},
            {"legendre", legendre_suite},
            {"frames", frames_suite},
            {"constants", constants_suite}};
  bool found = false;
  for (const auto& [name, fn] : table) {
    if (suite == "all" || suite == name) {
      fn(options, results);
      found = true;
    }
  }
  if (!found) throw ConfigError("unknown suite '" + std::string(suite) + "'", "--suite");
  return results;
}

inline std::size_t failure_count(const std::vector<CheckResult>& results) {
  return static_cast<std::size_t>(
      std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.passed; }));
}

inline Json check_report(std::string_view suite, const CheckOptions& options,
                         const std::vector<CheckResult>& results, double wall_time) {
  Json items = Json::array();
  for (const auto& r : results) {
    items.push_back({{"suite", r.suite},
                     {"name", r.name},
                     {"measured", gup::detail::number_or_null(r.measured)},
                     {"comparison", r.comparison == Comparison::AtMost ? "<=" : ">="},
                     {"threshold", gup::detail::number_or_null(r.threshold)},
                     {"passed", r.passed}});
  }
  return Json{{"command", "check"},
              {"suite", std::string(suite)},
              {"seed", options.seed},
              {"tolerance_scale", options.tolerance_scale},
              {"results", items},
              {"failures", failure_count(results)},
              {"wall_time_s", wall_time}};
}

}  // namespace gup::checks
