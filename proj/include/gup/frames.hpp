#pragma once

// Frame transformations. The deformed Galilean boost is a rotation in the
// Euclidean (u t, x) plane with tan(phi) = V / u; the relativistic boost is the
// Lorentz transformation with the effective light speed in place of c.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gup/deformed_algebra.hpp"
#include "gup/dynamics.hpp"
#include "gup/errors.hpp"
#include "gup/event.hpp"

namespace gup {

enum class GalileanLaw { Exact, FirstOrder, Ordinary };

constexpr std::string_view to_string(GalileanLaw law) noexcept {
  switch (law) {
    case GalileanLaw::Exact: return "exact";
    case GalileanLaw::FirstOrder: return "first_order";
    case GalileanLaw::Ordinary: return "ordinary";
  }
  return "?";
}

/// Maps events of a frame moving with velocity V along axis 1 into the rest frame.
/// u may be +infinity, in which case every law reduces to the ordinary one.
struct GalileanBoost {
  double V = 0.0;
  double u = std::numeric_limits<double>::infinity();
  GalileanLaw law = GalileanLaw::Exact;

  static GalileanBoost make(double V, double u, GalileanLaw law = GalileanLaw::Exact) {
    if (!std::isfinite(V)) throw DomainError("boost velocity must be finite");
    if (!(u > 0.0)) throw DomainError("effective velocity u must be positive");
    return {V, u, law};
  }

  friend bool operator==(const GalileanBoost&, const GalileanBoost&) = default;
};

template <std::size_t N>
Event<N> galilean_apply(const GalileanBoost& boost, const Event<N>& primed) {
  const double V = boost.V;
  const double xp = primed.x[0];
  const double tp = primed.t;
  Event<N> out = primed;
  switch (boost.law) {
    case GalileanLaw::Exact: {
      const double r = V / boost.u;
      const double k = 1.0 / std::hypot(1.0, r);
      out.x[0] = (xp + V * tp) * k;
      out.t = (tp - xp * (r / boost.u)) * k;
      break;
    }
    case GalileanLaw::FirstOrder: {
      const double r = V / boost.u;
      const double shrink = 1.0 - 0.5 * r * r;
      out.x[0] = (xp + V * tp) * shrink;
      out.t = tp * shrink - xp * (r / boost.u);
      break;
    }
    case GalileanLaw::Ordinary:
      out.x[0] = xp + V * tp;
      break;
  }
  return out;
}

/// V -> -V with the same u and law. Exact for the Exact and Ordinary laws.
inline GalileanBoost galilean_inverse(const GalileanBoost& boost) noexcept {
  return {-boost.V, boost.u, boost.law};
}

/// The Exact boost equivalent to applying b2 and then b1: rotation angles add, so
/// V = (V1 + V2) / (1 - V1 V2 / u^2).
///
/// When V1 V2 > u^2 the combined angle exceeds pi/2; the returned boost then agrees
/// with the composition up to the rotation by pi, (t, x) -> (-t, -x).
inline GalileanBoost galilean_compose(const GalileanBoost& b1, const GalileanBoost& b2) {
  if (b1.law != GalileanLaw::Exact || b2.law != GalileanLaw::Exact) {
    throw std::invalid_argument("galilean_compose: both boosts must use the exact law");
  }
  if (b1.u != b2.u) throw std::invalid_argument("galilean_compose: boosts differ in u");
  const double denominator = 1.0 - (b1.V / b1.u) * (b2.V / b1.u);
  if (std::abs(denominator) <= 8.0 * std::numeric_limits<double>::epsilon()) {
    throw SingularCompositionError("galilean_compose: V1 V2 = u^2 (combined angle pi/2)");
  }
  return {(b1.V + b2.V) / denominator, b1.u, GalileanLaw::Exact};
}

/// Rest-frame velocity of a body moving with v' in the boosted frame:
/// (v' + V) / (1 - v' V / u^2), the tangent-addition rule of the Euclidean rotation.
inline double velocity_compose(double v_prime, const GalileanBoost& boost) {
  const double denominator = 1.0 - (v_prime / boost.u) * (boost.V / boost.u);
  if (std::abs(denominator) <= 8.0 * std::numeric_limits<double>::epsilon()) {
    throw SingularCompositionError("velocity_compose: v' V = u^2");
  }
  return (v_prime + boost.V) / denominator;
}

/// Lorentz boost along axis 1 with light speed c_eff; requires |V| < c_eff.
struct LorentzBoost {
  double V = 0.0;
  double c_eff = 1.0;

  static LorentzBoost make(double V, double c_eff) {
    if (!(c_eff > 0.0) || !std::isfinite(c_eff)) {
      throw DomainError("effective light speed must be positive and finite");
    }
    if (!(std::abs(V) < c_eff)) {
      throw SuperluminalBoostError("|V| = " + std::to_string(std::abs(V)) +
                                   " must be below c_eff = " + std::to_string(c_eff));
    }
    return {V, c_eff};
  }

  friend bool operator==(const LorentzBoost&, const LorentzBoost&) = default;
};

template <std::size_t N>
Event<N> lorentz_apply(const LorentzBoost& boost, const Event<N>& primed) {
  if (!(std::abs(boost.V) < boost.c_eff)) {
    throw SuperluminalBoostError("lorentz_apply: |V| >= c_eff");
  }
  const double r = boost.V / boost.c_eff;
  // 1 - r^2 as (1 - r)(1 + r) keeps precision close to the light cone.
  const double g = 1.0 / std::sqrt((1.0 - r) * (1.0 + r));
  Event<N> out = primed;
  out.x[0] = (primed.x[0] + boost.V * primed.t) * g;
  out.t = (primed.t + primed.x[0] * (r / boost.c_eff)) * g;
  return out;
}

inline LorentzBoost lorentz_inverse(const LorentzBoost& boost) noexcept {
  return {-boost.V, boost.c_eff};
}

/// c^2 dt^2 - sum dx_i^2.
template <std::size_t N>
double minkowski_interval(const Event<N>& a, const Event<N>& b, double c) noexcept {
  const double dt = b.t - a.t;
  double s = c * c * dt * dt;
  for (std::size_t i = 0; i < N; ++i) {
    const double dx = b.x[i] - a.x[i];
    s -= dx * dx;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Covariance of free motion.

struct CovarianceResult {
  double linearity = 0.0;       ///< max |x - (a + b t)| of the least-squares line in the rest frame
  double slope_error = 0.0;     ///< |b - velocity_compose(v', boost)|
  double measured_slope = 0.0;
  double expected_slope = 0.0;

  double residual() const noexcept { return linearity + slope_error; }
};

/// Integrates a free particle in the boosted frame, maps every sample through the
/// boost and fits a straight line. The expected slope always comes from the
/// tangent-addition rule with the boost's u, so a boost with the Ordinary law
/// serves as a control that should fail once V/u is appreciable.
inline CovarianceResult covariance_residual(const HamiltonianKind& kind,
                                            const GalileanBoost& boost,
                                            const CanonicalState1D& initial, double t_end,
                                            double dt) {
  if (kind.potential.kind != PotentialKind::Free) {
    throw std::invalid_argument("covariance_residual: requires a free particle");
  }
  const auto traj = integrate(kind, initial, t_end, dt);
  const std::size_t n = traj.size();

  std::vector<double> ts(n);
  std::vector<double> xs(n);
  double t_mean = 0.0;
  double x_mean = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto e = galilean_apply(boost, Event1D{traj.times[k], traj.states[k].x});
    ts[k] = e.t;
    xs[k] = e.x[0];
    t_mean += e.t;
    x_mean += e.x[0];
  }
  t_mean /= static_cast<double>(n);
  x_mean /= static_cast<double>(n);

  double stt = 0.0;
  double stx = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    stt += (ts[k] - t_mean) * (ts[k] - t_mean);
    stx += (ts[k] - t_mean) * (xs[k] - x_mean);
  }
  CovarianceResult result;
  result.measured_slope = stx / stt;
  for (std::size_t k = 0; k < n; ++k) {
    const double fit = x_mean + result.measured_slope * (ts[k] - t_mean);
    result.linearity = std::max(result.linearity, std::abs(xs[k] - fit));
  }
  const double v_prime = velocity(kind, initial.p)[0];
  result.expected_slope = velocity_compose(v_prime, boost);
  result.slope_error = std::abs(result.measured_slope - result.expected_slope);
  return result;
}

}  // namespace gup
