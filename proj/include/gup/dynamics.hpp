#pragma once

// Hamiltonian models written in canonical variables, Hamilton's equations and
// fixed-step RK4 trajectories.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gup/deformed_algebra.hpp"
#include "gup/errors.hpp"

namespace gup {

enum class PotentialKind { Free, Harmonic, UniformField };

/// External potential U(x). Harmonic: k|x|^2/2. UniformField: -F x_1 (force F along axis 1).
struct PotentialSpec {
  PotentialKind kind = PotentialKind::Free;
  double strength = 0.0;

  static PotentialSpec free() { return {}; }
  static PotentialSpec harmonic(double k) { return {PotentialKind::Harmonic, k}; }
  static PotentialSpec uniform_field(double force) { return {PotentialKind::UniformField, force}; }

  template <std::size_t N>
  double value(const Vec<N>& x) const noexcept {
    switch (kind) {
      case PotentialKind::Harmonic:
        return 0.5 * strength * norm2(x);
      case PotentialKind::UniformField:
        return -strength * x[0];
      case PotentialKind::Free:
        break;
    }
    return 0.0;
  }

  template <std::size_t N>
  Vec<N> gradient(const Vec<N>& x) const noexcept {
    Vec<N> g{};
    switch (kind) {
      case PotentialKind::Harmonic:
        for (std::size_t i = 0; i < N; ++i) g[i] = strength * x[i];
        break;
      case PotentialKind::UniformField:
        g[0] = -strength;
        break;
      case PotentialKind::Free:
        break;
    }
    return g;
  }

  friend bool operator==(const PotentialSpec&, const PotentialSpec&) = default;
};

enum class Model {
  NonRelExact1D,       ///< tan^2(sqrt(beta) p) / (2 m beta) + U
  NonRelFirstOrder1D,  ///< p^2/2m + (beta/3m) p^4 + U
  NonRel3DFirstOrder,  ///< p^2/2m + (beta/2m) p^4 + U
  NonRel3DExact,       ///< p^2 / (2m (1 - beta p^2)) + U
  RelFirstOrder1D,     ///< mc^2 + p^2/2m - (1/(8 m^2 c^2) - beta/3) p^4/m + U
  EffectiveSquareRoot, ///< -+ m s^2 sqrt(1 -+ p^2/(m^2 s^2)) +- m s^2 + U
};

enum class RootSign { Plus, Minus };

constexpr std::size_t dimension(Model model) noexcept {
  return (model == Model::NonRel3DFirstOrder || model == Model::NonRel3DExact) ? 3 : 1;
}

constexpr std::string_view to_string(Model model) noexcept {
  switch (model) {
    case Model::NonRelExact1D: return "NonRelExact1D";
    case Model::NonRelFirstOrder1D: return "NonRelFirstOrder1D";
    case Model::NonRel3DFirstOrder: return "NonRel3DFirstOrder";
    case Model::NonRel3DExact: return "NonRel3DExact";
    case Model::RelFirstOrder1D: return "RelFirstOrder1D";
    case Model::EffectiveSquareRoot: return "EffectiveSquareRoot";
  }
  return "?";
}

/// One of the Hamiltonian models together with its parameters.
///
/// `scale_velocity` is c for RelFirstOrder1D and the velocity scale (u or c_eff)
/// of EffectiveSquareRoot. With sign Minus the square-root model is
///   H = -m u^2 sqrt(1 - p^2/(m^2 u^2)) + m u^2 + U,
/// with sign Plus it is
///   H = m c~^2 sqrt(1 + p^2/(m^2 c~^2)) - m c~^2 + m c^2 + U,
/// where the rest term m c^2 uses `rest_speed` (zero drops it).
struct HamiltonianKind {
  Model model = Model::NonRelFirstOrder1D;
  DeformationParameters params;
  PotentialSpec potential;
  double scale_velocity = 0.0;
  RootSign sign = RootSign::Minus;
  double rest_speed = 0.0;

  static HamiltonianKind nonrel_exact_1d(DeformationParameters p, PotentialSpec u = {}) {
    return {Model::NonRelExact1D, p, u};
  }
  static HamiltonianKind nonrel_first_order_1d(DeformationParameters p, PotentialSpec u = {}) {
    return {Model::NonRelFirstOrder1D, p, u};
  }
  static HamiltonianKind nonrel_3d_first_order(DeformationParameters p, PotentialSpec u = {}) {
    return {Model::NonRel3DFirstOrder, p, u};
  }
  static HamiltonianKind nonrel_3d_exact(DeformationParameters p, PotentialSpec u = {}) {
    return {Model::NonRel3DExact, p, u};
  }
  static HamiltonianKind rel_first_order_1d(DeformationParameters p, double c,
                                            PotentialSpec u = {}) {
    if (!(c > 0.0)) throw DomainError("speed of light must be positive");
    return {Model::RelFirstOrder1D, p, u, c};
  }
  static HamiltonianKind effective_square_root(DeformationParameters p, double scale, RootSign sign,
                                               PotentialSpec u = {}, double rest_speed = 0.0) {
    if (!(scale > 0.0)) throw DomainError("square-root model needs a positive velocity scale");
    return {Model::EffectiveSquareRoot, p, u, scale, sign, rest_speed};
  }

  std::size_t dim() const noexcept { return dimension(model); }

  friend bool operator==(const HamiltonianKind&, const HamiltonianKind&) = default;
};

/// Coefficient kappa in the relativistic quartic term -kappa p^4 / m.
inline double relativistic_quartic_coefficient(const HamiltonianKind& kind) noexcept {
  const double m = kind.params.mass();
  const double c = kind.scale_velocity;
  return 1.0 / (8.0 * m * m * c * c) - kind.params.beta() / 3.0;
}

namespace detail {

template <std::size_t N>
void require_dimension(const HamiltonianKind& kind) {
  if (kind.dim() != N) {
    throw std::invalid_argument(std::string(to_string(kind.model)) + " is " +
                                std::to_string(kind.dim()) + "-dimensional, state has " +
                                std::to_string(N));
  }
}

}  // namespace detail

/// Supremum of |p| over which the model can be evaluated.
inline double momentum_domain_limit(const HamiltonianKind& kind) noexcept {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const auto& params = kind.params;
  switch (kind.model) {
    case Model::NonRelExact1D:
      return tan_branch_limit(params);
    case Model::NonRel3DExact:
      return params.undeformed() ? inf : 1.0 / std::sqrt(params.beta());
    case Model::EffectiveSquareRoot:
      return kind.sign == RootSign::Minus ? params.mass() * kind.scale_velocity : inf;
    default:
      return inf;
  }
}

/// Supremum of |p| on which |dH/dp| increases with |p|.
inline double monotone_branch_limit(const HamiltonianKind& kind) noexcept {
  if (kind.model == Model::RelFirstOrder1D) {
    const double kappa = relativistic_quartic_coefficient(kind);
    if (kappa > 0.0) return std::sqrt(1.0 / (12.0 * kappa));
    return std::numeric_limits<double>::infinity();
  }
  return momentum_domain_limit(kind);
}

template <std::size_t N>
void check_domain(const HamiltonianKind& kind, const CanonicalState<N>& state) {
  detail::require_dimension<N>(kind);
  const double limit = momentum_domain_limit(kind);
  const double magnitude = std::sqrt(norm2(state.p));
  if (!std::isfinite(magnitude) || !(magnitude < limit)) {
    throw DomainError(std::string(to_string(kind.model)) + ": |p| = " +
                      std::to_string(magnitude) + " outside the domain |p| < " +
                      std::to_string(limit));
  }
  for (double xi : state.x) {
    if (!std::isfinite(xi)) throw DomainError("non-finite position");
  }
}

/// Kinetic part of H (no potential) at momentum p.
template <std::size_t N>
double kinetic_energy(const HamiltonianKind& kind, const Vec<N>& p) {
  const double m = kind.params.mass();
  const double beta = kind.params.beta();
  const double p2 = norm2(p);
  switch (kind.model) {
    case Model::NonRelExact1D: {
      if (beta == 0.0) return p2 / (2.0 * m);
      const double t = std::tan(std::sqrt(beta) * p[0]);
      return t * t / (2.0 * m * beta);
    }
    case Model::NonRelFirstOrder1D:
      return p2 / (2.0 * m) + beta / (3.0 * m) * p2 * p2;
    case Model::NonRel3DFirstOrder:
      return p2 / (2.0 * m) + beta / (2.0 * m) * p2 * p2;
    case Model::NonRel3DExact:
      return p2 / (2.0 * m * (1.0 - beta * p2));
    case Model::RelFirstOrder1D: {
      const double c = kind.scale_velocity;
      return m * c * c + p2 / (2.0 * m) - relativistic_quartic_coefficient(kind) * p2 * p2 / m;
    }
    case Model::EffectiveSquareRoot: {
      const double s2 = kind.scale_velocity * kind.scale_velocity;
      const double q = p2 / (m * m * s2);
      // m s^2 (1 -+ sqrt(1 -+ q)) rewritten without cancellation for s >> p/m.
      if (kind.sign == RootSign::Minus) return p2 / (m * (1.0 + std::sqrt(1.0 - q)));
      return p2 / (m * (std::sqrt(1.0 + q) + 1.0)) + m * kind.rest_speed * kind.rest_speed;
    }
  }
  return 0.0;
}

template <std::size_t N>
double hamiltonian_value(const HamiltonianKind& kind, const CanonicalState<N>& state) {
  check_domain(kind, state);
  return kinetic_energy(kind, state.p) + kind.potential.value(state.x);
}

/// H at p = 0 minus U: the rest-energy constant carried by relativistic forms.
inline double hamiltonian_offset(const HamiltonianKind& kind) {
  if (kind.dim() == 3) return kinetic_energy<3>(kind, Vec3{});
  return kinetic_energy<1>(kind, Vec<1>{});
}

/// H with the constant offset removed.
template <std::size_t N>
double hamiltonian_dynamical(const HamiltonianKind& kind, const CanonicalState<N>& state) {
  return hamiltonian_value(kind, state) - hamiltonian_offset(kind);
}

/// dx/dt = dH/dp in closed form.
template <std::size_t N>
Vec<N> velocity(const HamiltonianKind& kind, const Vec<N>& p) {
  const double m = kind.params.mass();
  const double beta = kind.params.beta();
  const double p2 = norm2(p);
  if (kind.model == Model::NonRelExact1D) {
    if (beta == 0.0) return Vec<N>{p[0] / m};
    const double a = std::sqrt(beta);
    const double t = std::tan(a * p[0]);
    const double sec2 = 1.0 + t * t;
    return Vec<N>{t * sec2 / (m * a)};
  }
  double factor = 1.0 / m;
  switch (kind.model) {
    case Model::NonRelFirstOrder1D:
      factor = (1.0 + 4.0 / 3.0 * beta * p2) / m;
      break;
    case Model::NonRel3DFirstOrder:
      factor = (1.0 + 2.0 * beta * p2) / m;
      break;
    case Model::NonRel3DExact: {
      const double d = 1.0 - beta * p2;
      factor = 1.0 / (m * d * d);
      break;
    }
    case Model::RelFirstOrder1D:
      factor = (1.0 - 4.0 * relativistic_quartic_coefficient(kind) * p2) / m;
      break;
    case Model::EffectiveSquareRoot: {
      const double q = p2 / (m * m * kind.scale_velocity * kind.scale_velocity);
      factor = 1.0 / (m * std::sqrt(kind.sign == RootSign::Minus ? 1.0 - q : 1.0 + q));
      break;
    }
    case Model::NonRelExact1D:
      break;
  }
  Vec<N> v{};
  for (std::size_t i = 0; i < N; ++i) v[i] = factor * p[i];
  return v;
}

/// Speed |dH/dp| along a momentum of magnitude s >= 0, and its derivative in s.
/// Shared by the Legendre inversion.
struct SpeedProfile {
  double speed;
  double slope;
};

inline SpeedProfile speed_profile(const HamiltonianKind& kind, double s) {
  const double m = kind.params.mass();
  const double beta = kind.params.beta();
  const double s2 = s * s;
  switch (kind.model) {
    case Model::NonRelExact1D: {
      if (beta == 0.0) return {s / m, 1.0 / m};
      const double a = std::sqrt(beta);
      const double t = std::tan(a * s);
      const double sec2 = 1.0 + t * t;
      return {t * sec2 / (m * a), sec2 * (sec2 + 2.0 * t * t) / m};
    }
    case Model::NonRelFirstOrder1D:
      return {s * (1.0 + 4.0 / 3.0 * beta * s2) / m, (1.0 + 4.0 * beta * s2) / m};
    case Model::NonRel3DFirstOrder:
      return {s * (1.0 + 2.0 * beta * s2) / m, (1.0 + 6.0 * beta * s2) / m};
    case Model::NonRel3DExact: {
      const double d = 1.0 - beta * s2;
      return {s / (m * d * d), (1.0 + 3.0 * beta * s2) / (m * d * d * d)};
    }
    case Model::RelFirstOrder1D: {
      const double kappa = relativistic_quartic_coefficient(kind);
      return {s * (1.0 - 4.0 * kappa * s2) / m, (1.0 - 12.0 * kappa * s2) / m};
    }
    case Model::EffectiveSquareRoot: {
      const double q = s2 / (m * m * kind.scale_velocity * kind.scale_velocity);
      const double r = kind.sign == RootSign::Minus ? 1.0 - q : 1.0 + q;
      return {s / (m * std::sqrt(r)), 1.0 / (m * r * std::sqrt(r))};
    }
  }
  return {0.0, 0.0};
}

/// Time derivative of a phase state: x holds dx/dt and p holds dp/dt.
template <std::size_t N>
using PhaseDerivative = CanonicalState<N>;

template <std::size_t N>
PhaseDerivative<N> hamilton_rhs(const HamiltonianKind& kind, const CanonicalState<N>& state) {
  check_domain(kind, state);
  PhaseDerivative<N> d;
  d.x = velocity(kind, state.p);
  const Vec<N> grad = kind.potential.gradient(state.x);
  for (std::size_t i = 0; i < N; ++i) d.p[i] = -grad[i];
  return d;
}

/// Central-difference fallback for hamilton_rhs.
template <std::size_t N>
PhaseDerivative<N> hamilton_rhs_numeric(const HamiltonianKind& kind,
                                        const CanonicalState<N>& state,
                                        const FiniteDifference& fd = {}) {
  check_domain(kind, state);
  const auto energy = [&kind](const CanonicalState<N>& s) { return hamiltonian_value(kind, s); };
  PhaseDerivative<N> d;
  for (std::size_t i = 0; i < N; ++i) {
    d.x[i] = partial_derivative(energy, state, Canonical::Momentum, i, fd);
    d.p[i] = -partial_derivative(energy, state, Canonical::Position, i, fd);
  }
  return d;
}

template <std::size_t N>
struct Trajectory {
  std::vector<double> times;
  std::vector<CanonicalState<N>> states;
  std::vector<double> energies;
  double step = 0.0;

  std::size_t size() const noexcept { return times.size(); }
  bool empty() const noexcept { return times.empty(); }
};

namespace detail {

template <std::size_t N>
CanonicalState<N> axpy(const CanonicalState<N>& s, double a, const PhaseDerivative<N>& d) {
  CanonicalState<N> out = s;
  for (std::size_t i = 0; i < N; ++i) {
    out.x[i] += a * d.x[i];
    out.p[i] += a * d.p[i];
  }
  return out;
}

/// The RK4 change of state over one step of length h.
template <std::size_t N>
PhaseDerivative<N> rk4_increment(const HamiltonianKind& kind, const CanonicalState<N>& s, double h) {
  const auto k1 = hamilton_rhs(kind, s);
  const auto k2 = hamilton_rhs(kind, axpy(s, 0.5 * h, k1));
  const auto k3 = hamilton_rhs(kind, axpy(s, 0.5 * h, k2));
  const auto k4 = hamilton_rhs(kind, axpy(s, h, k3));
  PhaseDerivative<N> delta;
  for (std::size_t i = 0; i < N; ++i) {
    delta.x[i] = h / 6.0 * (k1.x[i] + 2.0 * k2.x[i] + 2.0 * k3.x[i] + k4.x[i]);
    delta.p[i] = h / 6.0 * (k1.p[i] + 2.0 * k2.p[i] + 2.0 * k3.p[i] + k4.p[i]);
  }
  return delta;
}

template <std::size_t N>
CanonicalState<N> rk4_step(const HamiltonianKind& kind, const CanonicalState<N>& s, double h) {
  return axpy(s, 1.0, rk4_increment(kind, s, h));
}

/// Kahan summation of one increment into value, carrying the lost low-order bits.
inline void compensated_add(double& value, double& carry, double increment) noexcept {
  const double y = increment - carry;
  const double t = value + y;
  carry = (t - value) - y;
  value = t;
}

}  // namespace detail

/// Number of steps used for a run; the last step is shortened to land on t_end.
inline std::size_t step_count(double t_end, double dt) {
  const double ratio = t_end / dt;
  const auto n = static_cast<std::size_t>(std::ceil(ratio - 1e-9 * std::max(1.0, ratio)));
  return std::max<std::size_t>(n, 1);
}

/// Classic fixed-step RK4 integration of Hamilton's equations.
/// Energies are recorded with the same model.
template <std::size_t N>
Trajectory<N> integrate(const HamiltonianKind& kind, const CanonicalState<N>& initial,
                        double t_end, double dt) {
  detail::require_dimension<N>(kind);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("integrate: dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw DomainError("integrate: t_end must be positive");
  }
  check_domain(kind, initial);

  const std::size_t steps = step_count(t_end, dt);
  Trajectory<N> traj;
  traj.step = dt;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.energies.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(initial);
  traj.energies.push_back(hamiltonian_value(kind, initial));

  // Increments are accumulated with compensated summation so that rounding in
  // the state update stays below the RK4 truncation error over long runs.
  CanonicalState<N> state = initial;
  CanonicalState<N> carry{};
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t_prev = traj.times.back();
    const double t_next = k == steps ? t_end : static_cast<double>(k) * dt;
    try {
      const auto delta = detail::rk4_increment(kind, state, t_next - t_prev);
      for (std::size_t i = 0; i < N; ++i) {
        detail::compensated_add(state.x[i], carry.x[i], delta.x[i]);
        detail::compensated_add(state.p[i], carry.p[i], delta.p[i]);
      }
      traj.energies.push_back(hamiltonian_value(kind, state));
    } catch (const DomainError& e) {
      throw IntegrationDomainError(k, e.what());
    }
    traj.times.push_back(t_next);
    traj.states.push_back(state);
  }
  return traj;
}

/// max_t |E(t) - E(0)| / max(|E(0)|, 1e-30).
template <std::size_t N>
double energy_drift(const Trajectory<N>& traj) {
  if (traj.energies.empty()) return 0.0;
  const double e0 = traj.energies.front();
  const double scale = std::max(std::abs(e0), 1e-30);
  double worst = 0.0;
  for (double e : traj.energies) worst = std::max(worst, std::abs(e - e0));
  return worst / scale;
}

/// Step-halving estimate of the endpoint error of a run at step dt: |y(dt) - y(dt/2)| / 15.
template <std::size_t N>
double richardson_endpoint_error(const HamiltonianKind& kind, const CanonicalState<N>& initial,
                                 double t_end, double dt) {
  const auto coarse = integrate(kind, initial, t_end, dt).states.back();
  const auto fine = integrate(kind, initial, t_end, 0.5 * dt).states.back();
  double worst = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    worst = std::max({worst, std::abs(coarse.x[i] - fine.x[i]), std::abs(coarse.p[i] - fine.p[i])});
  }
  return worst / 15.0;
}

}  // namespace gup
