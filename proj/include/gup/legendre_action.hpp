#pragma once

// Velocity <-> momentum inversion, Lagrangians in first-order and square-root
// form, path actions and the Euclidean interval.

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

enum class LagrangianModel {
  FirstOrder1D,  ///< m v^2/2 - (beta m^3/3) v^4 - U
  SquareRoot1D,  ///< m u^2 sqrt(1 + v^2/u^2) - m u^2 - U
  FirstOrder3D,  ///< m v^2/2 - (beta m^3/2) v^4 - U
  Relativistic,  ///< -m c^2 sqrt(1 - v^2/c^2) - U
};

constexpr std::size_t dimension(LagrangianModel model) noexcept {
  return model == LagrangianModel::FirstOrder3D ? 3 : 1;
}

constexpr std::string_view to_string(LagrangianModel model) noexcept {
  switch (model) {
    case LagrangianModel::FirstOrder1D: return "FirstOrder1D";
    case LagrangianModel::SquareRoot1D: return "SquareRoot1D";
    case LagrangianModel::FirstOrder3D: return "FirstOrder3D";
    case LagrangianModel::Relativistic: return "Relativistic";
  }
  return "?";
}

struct LagrangianKind {
  LagrangianModel model = LagrangianModel::FirstOrder1D;
  DeformationParameters params;
  PotentialSpec potential;
  double scale_velocity = 0.0;  ///< u for SquareRoot1D, c (or c_eff) for Relativistic

  static LagrangianKind first_order_1d(DeformationParameters p, PotentialSpec u = {}) {
    return {LagrangianModel::FirstOrder1D, p, u};
  }
  static LagrangianKind first_order_3d(DeformationParameters p, PotentialSpec u = {}) {
    return {LagrangianModel::FirstOrder3D, p, u};
  }
  static LagrangianKind square_root_1d(DeformationParameters p, double u, PotentialSpec pot = {}) {
    if (!(u > 0.0)) throw DomainError("square-root Lagrangian needs u > 0");
    return {LagrangianModel::SquareRoot1D, p, pot, u};
  }
  static LagrangianKind relativistic(DeformationParameters p, double c, PotentialSpec pot = {}) {
    if (!(c > 0.0)) throw DomainError("relativistic Lagrangian needs c > 0");
    return {LagrangianModel::Relativistic, p, pot, c};
  }

  std::size_t dim() const noexcept { return dimension(model); }
};

/// u^2 = 3 / (8 beta m^2): the velocity scale under which the square-root forms
/// reproduce the one-dimensional first-order models.
inline double effective_velocity_1d(const DeformationParameters& params) noexcept {
  if (params.undeformed()) return std::numeric_limits<double>::infinity();
  return std::sqrt(3.0 / (8.0 * params.beta())) / params.mass();
}

/// u^2 = 1 / (4 beta m^2) for the three-dimensional algebra.
inline double effective_velocity_3d(const DeformationParameters& params) noexcept {
  if (params.undeformed()) return std::numeric_limits<double>::infinity();
  return 0.5 / (std::sqrt(params.beta()) * params.mass());
}

// ---------------------------------------------------------------------------
// Momentum from velocity.

/// beta m^2 v^2; the first-order inversion is trustworthy while this stays below ~0.1.
template <std::size_t N>
double first_order_expansion_parameter(const Vec<N>& v, const DeformationParameters& params) {
  const double m = params.mass();
  return params.beta() * m * m * norm2(v);
}

/// p = m v (1 - (4/3) beta m^2 v^2).
inline double momentum_from_velocity_first_order(double v, const DeformationParameters& params) {
  const double m = params.mass();
  return m * v * (1.0 - 4.0 / 3.0 * params.beta() * m * m * v * v);
}

/// p_i = m v_i (1 - 2 beta m^2 v^2).
inline Vec3 momentum_from_velocity_first_order(const Vec3& v, const DeformationParameters& params) {
  const double m = params.mass();
  const double factor = m * (1.0 - 2.0 * params.beta() * m * m * norm2(v));
  return {factor * v[0], factor * v[1], factor * v[2]};
}

namespace detail {

/// Solves speed_profile(kind, s) = target for s on the monotone branch.
inline double invert_speed(const HamiltonianKind& kind, double target) {
  if (target == 0.0) return 0.0;
  const double tolerance = 1e-12 * std::max(1.0, target);
  const double limit = monotone_branch_limit(kind);

  double lo = 0.0;
  double hi = 0.0;
  if (std::isfinite(limit)) {
    hi = std::nextafter(limit, 0.0);
    const double top = speed_profile(kind, hi).speed;
    if (!(top >= target)) {
      throw NoRootError("velocity " + std::to_string(target) +
                        " exceeds the attainable speed " + std::to_string(top) + " of " +
                        std::string(to_string(kind.model)));
    }
  } else {
    hi = std::max(kind.params.mass() * target, std::numeric_limits<double>::min());
    int doublings = 0;
    while (!(speed_profile(kind, hi).speed >= target)) {
      lo = hi;
      hi *= 2.0;
      if (++doublings > 2100 || !std::isfinite(hi)) {
        throw NoRootError("velocity " + std::to_string(target) + " is not attainable by " +
                          std::string(to_string(kind.model)));
      }
    }
  }

  double s = std::clamp(kind.params.mass() * target, lo, hi);
  for (int iter = 0; iter < 64; ++iter) {
    const auto [speed, slope] = speed_profile(kind, s);
    const double residual = speed - target;
    if (std::abs(residual) < tolerance) return s;
    if (residual < 0.0) {
      lo = s;
    } else {
      hi = s;
    }
    double next = s - residual / slope;
    if (!(slope > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == s) return s;
    s = next;
  }
  throw NonConvergenceError("momentum inversion did not converge within 64 iterations");
}

}  // namespace detail

/// Solves v = dH/dp for p with safeguarded Newton iteration on the monotone branch.
/// Residual |dH/dp - v| < 1e-12 max(1, |v|).
template <std::size_t N>
Vec<N> momentum_from_velocity_exact(const Vec<N>& v, const HamiltonianKind& kind) {
  detail::require_dimension<N>(kind);
  const double speed = std::sqrt(norm2(v));
  if (!std::isfinite(speed)) throw DomainError("non-finite velocity");
  Vec<N> p{};
  if (speed == 0.0) return p;
  const double s = detail::invert_speed(kind, speed);
  for (std::size_t i = 0; i < N; ++i) p[i] = s * (v[i] / speed);
  return p;
}

inline double momentum_from_velocity_exact(double v, const HamiltonianKind& kind) {
  return momentum_from_velocity_exact(Vec<1>{v}, kind)[0];
}

// ---------------------------------------------------------------------------
// Lagrangians.

template <std::size_t N>
double lagrangian_value(const LagrangianKind& kind, const Vec<N>& x, const Vec<N>& v) {
  if (kind.dim() != N) {
    throw std::invalid_argument(std::string(to_string(kind.model)) + " has dimension " +
                                std::to_string(kind.dim()));
  }
  const double m = kind.params.mass();
  const double beta = kind.params.beta();
  const double v2 = norm2(v);
  const double potential = kind.potential.value(x);
  switch (kind.model) {
    case LagrangianModel::FirstOrder1D:
      return 0.5 * m * v2 - beta * m * m * m / 3.0 * v2 * v2 - potential;
    case LagrangianModel::FirstOrder3D:
      return 0.5 * m * v2 - 0.5 * beta * m * m * m * v2 * v2 - potential;
    case LagrangianModel::SquareRoot1D: {
      const double q = v2 / (kind.scale_velocity * kind.scale_velocity);
      // m u^2 (sqrt(1+q) - 1), written to stay accurate for u >> |v|.
      return m * v2 / (std::sqrt(1.0 + q) + 1.0) - potential;
    }
    case LagrangianModel::Relativistic: {
      const double c = kind.scale_velocity;
      const double q = v2 / (c * c);
      if (!(q < 1.0)) {
        throw DomainError("relativistic Lagrangian: |v| = " + std::to_string(std::sqrt(v2)) +
                          " must be below c = " + std::to_string(c));
      }
      return -m * c * c * std::sqrt(1.0 - q) - potential;
    }
  }
  return 0.0;
}

inline double lagrangian_value(const LagrangianKind& kind, double x, double v) {
  return lagrangian_value(kind, Vec<1>{x}, Vec<1>{v});
}

/// The explicit constant carried by the stored Lagrangian (-m u^2 for SquareRoot1D).
/// It has no effect on the equations of motion.
inline double lagrangian_offset(const LagrangianKind& kind) noexcept {
  if (kind.model == LagrangianModel::SquareRoot1D) {
    return -kind.params.mass() * kind.scale_velocity * kind.scale_velocity;
  }
  return 0.0;
}

/// L with the constant offset removed, e.g. m u^2 sqrt(1 + v^2/u^2) - U.
template <std::size_t N>
double lagrangian_dynamical(const LagrangianKind& kind, const Vec<N>& x, const Vec<N>& v) {
  return lagrangian_value(kind, x, v) - lagrangian_offset(kind);
}

/// L = v p - H with p from the exact inversion; the Legendre partner of H by construction.
template <std::size_t N>
double definitional_lagrangian(const HamiltonianKind& kind, const Vec<N>& x, const Vec<N>& v) {
  const Vec<N> p = momentum_from_velocity_exact(v, kind);
  return dot(v, p) - hamiltonian_value(kind, CanonicalState<N>{x, p});
}

/// |L(v) + H(p(v)) - v p(v)| with p(v) from the exact inversion of H.
template <std::size_t N>
double legendre_roundtrip_residual(const HamiltonianKind& hkind, const LagrangianKind& lkind,
                                   const Vec<N>& v, const Vec<N>& x = {}) {
  const Vec<N> p = momentum_from_velocity_exact(v, hkind);
  const double h = hamiltonian_value(hkind, CanonicalState<N>{x, p});
  return std::abs(lagrangian_value(lkind, x, v) + h - dot(v, p));
}

/// Residual against the definitional Lagrangian v p - H.
template <std::size_t N>
double legendre_roundtrip_residual(const HamiltonianKind& hkind, const Vec<N>& v,
                                   const Vec<N>& x = {}) {
  const Vec<N> p = momentum_from_velocity_exact(v, hkind);
  const double h = hamiltonian_value(hkind, CanonicalState<N>{x, p});
  return std::abs(definitional_lagrangian(hkind, x, v) + h - dot(v, p));
}

// ---------------------------------------------------------------------------
// Paths and actions.

template <std::size_t N>
struct PathSample {
  std::vector<double> times;
  std::vector<Vec<N>> positions;
  std::vector<Vec<N>> velocities;

  std::size_t size() const noexcept { return times.size(); }
};

namespace detail {

template <std::size_t N>
void validate_times(const std::vector<double>& times, std::size_t positions) {
  if (times.size() != positions) {
    throw std::invalid_argument("path: times and positions differ in length");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("path: times must increase");
  }
}

}  // namespace detail

/// Builds a path whose velocities come from second-order finite differences
/// (three-point formulas, valid on non-uniform grids).
template <std::size_t N>
PathSample<N> make_path_sample(std::vector<double> times, std::vector<Vec<N>> positions) {
  detail::validate_times<N>(times, positions.size());
  const std::size_t n = times.size();
  std::vector<Vec<N>> velocities(n);
  if (n == 2) {
    const double dt = times[1] - times[0];
    for (std::size_t i = 0; i < N; ++i) {
      velocities[0][i] = velocities[1][i] = (positions[1][i] - positions[0][i]) / dt;
    }
  } else if (n >= 3) {
    auto three_point = [&](std::size_t a, double wa, double wb, double wc, std::size_t at) {
      for (std::size_t i = 0; i < N; ++i) {
        velocities[at][i] =
            wa * positions[a][i] + wb * positions[a + 1][i] + wc * positions[a + 2][i];
      }
    };
    {
      const double h1 = times[1] - times[0];
      const double h2 = times[2] - times[1];
      three_point(0, -(2.0 * h1 + h2) / (h1 * (h1 + h2)), (h1 + h2) / (h1 * h2),
                  -h1 / (h2 * (h1 + h2)), 0);
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double h1 = times[k] - times[k - 1];
      const double h2 = times[k + 1] - times[k];
      three_point(k - 1, -h2 / (h1 * (h1 + h2)), (h2 - h1) / (h1 * h2), h1 / (h2 * (h1 + h2)), k);
    }
    {
      const double h1 = times[n - 2] - times[n - 3];
      const double h2 = times[n - 1] - times[n - 2];
      three_point(n - 3, h2 / (h1 * (h1 + h2)), -(h1 + h2) / (h1 * h2),
                  (2.0 * h2 + h1) / (h2 * (h1 + h2)), n - 1);
    }
  }
  return {std::move(times), std::move(positions), std::move(velocities)};
}

/// Path with velocities supplied by the caller.
template <std::size_t N>
PathSample<N> make_path_sample(std::vector<double> times, std::vector<Vec<N>> positions,
                               std::vector<Vec<N>> velocities) {
  detail::validate_times<N>(times, positions.size());
  if (velocities.size() != positions.size()) {
    throw std::invalid_argument("path: velocities and positions differ in length");
  }
  return {std::move(times), std::move(positions), std::move(velocities)};
}

/// Path of an integrated trajectory, with velocities dH/dp taken from the model.
template <std::size_t N>
PathSample<N> path_from_trajectory(const HamiltonianKind& kind, const Trajectory<N>& traj) {
  std::vector<Vec<N>> positions;
  std::vector<Vec<N>> velocities;
  positions.reserve(traj.size());
  velocities.reserve(traj.size());
  for (const auto& s : traj.states) {
    positions.push_back(s.x);
    velocities.push_back(velocity(kind, s.p));
  }
  return make_path_sample<N>(traj.times, std::move(positions), std::move(velocities));
}

/// Trapezoid quadrature of L over the samples.
template <std::size_t N>
double action_along_path(const LagrangianKind& kind, const PathSample<N>& path) {
  if (path.size() < 2) throw std::invalid_argument("action_along_path: need at least 2 samples");
  double action = 0.0;
  double previous = lagrangian_value(kind, path.positions[0], path.velocities[0]);
  for (std::size_t k = 1; k < path.size(); ++k) {
    const double current = lagrangian_value(kind, path.positions[k], path.velocities[k]);
    action += 0.5 * (path.times[k] - path.times[k - 1]) * (previous + current);
    previous = current;
  }
  return action;
}

/// Euclidean arc length of a path in the (u t, x) space, piecewise linear between samples.
template <std::size_t N>
double euclidean_arc_length(const PathSample<N>& path, double u) {
  double length = 0.0;
  for (std::size_t k = 1; k < path.size(); ++k) {
    length += std::sqrt(euclidean_interval(Event<N>{path.times[k - 1], path.positions[k - 1]},
                                           Event<N>{path.times[k], path.positions[k]}, u));
  }
  return length;
}

}  // namespace gup
