#pragma once

// Deformed Poisson structures {X,P} = 1 + beta P^2 (1D) and the
// translation-invariant 3D algebra, expressed through canonical variables.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gup/errors.hpp"

namespace gup {

template <std::size_t N>
using Vec = std::array<double, N>;
using Vec3 = Vec<3>;

template <std::size_t N>
constexpr double dot(const Vec<N>& a, const Vec<N>& b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
  return s;
}

template <std::size_t N>
constexpr double norm2(const Vec<N>& a) noexcept {
  return dot(a, a);
}

/// Deformation strength beta (inverse momentum squared) for a body of given mass.
/// The mass-independent constant gamma = sqrt(beta) * mass is derived.
class DeformationParameters {
 public:
  DeformationParameters() = default;

  static DeformationParameters from_beta(double beta, double mass) {
    validate_mass(mass);
    if (!std::isfinite(beta) || beta < 0.0) {
      throw DomainError("beta must be finite and non-negative, got " + std::to_string(beta));
    }
    return DeformationParameters(beta, mass, std::sqrt(beta) * mass);
  }

  /// beta = gamma^2 / m^2.
  static DeformationParameters from_gamma(double gamma, double mass) {
    validate_mass(mass);
    if (!std::isfinite(gamma) || gamma < 0.0) {
      throw DomainError("gamma must be finite and non-negative, got " + std::to_string(gamma));
    }
    const double ratio = gamma / mass;
    return DeformationParameters(ratio * ratio, mass, gamma);
  }

  double beta() const noexcept { return beta_; }
  double mass() const noexcept { return mass_; }
  double gamma() const noexcept { return gamma_; }
  bool undeformed() const noexcept { return beta_ == 0.0; }

  friend bool operator==(const DeformationParameters&, const DeformationParameters&) = default;

 private:
  DeformationParameters(double beta, double mass, double gamma)
      : beta_(beta), mass_(mass), gamma_(gamma) {}

  static void validate_mass(double mass) {
    if (!std::isfinite(mass) || mass <= 0.0) {
      throw DomainError("mass must be finite and positive, got " + std::to_string(mass));
    }
  }

  double beta_ = 0.0;
  double mass_ = 1.0;
  double gamma_ = 0.0;
};

/// Canonical (non-deformed) phase-space point with {x_i, p_j} = delta_ij.
template <std::size_t N>
struct CanonicalState {
  Vec<N> x{};
  Vec<N> p{};

  friend bool operator==(const CanonicalState&, const CanonicalState&) = default;
};

using CanonicalState1D = CanonicalState<1>;
using CanonicalState3D = CanonicalState<3>;

inline CanonicalState1D make_state(double x, double p) { return {{x}, {p}}; }

/// Momentum limit of the principal tan branch, pi / (2 sqrt(beta)); infinite when beta = 0.
inline double tan_branch_limit(const DeformationParameters& params) noexcept {
  if (params.undeformed()) return std::numeric_limits<double>::infinity();
  return 0.5 * std::numbers::pi / std::sqrt(params.beta());
}

/// P = tan(sqrt(beta) p) / sqrt(beta) on the branch containing p = 0.
inline double momentum_map_1d(double p, const DeformationParameters& params) {
  if (params.undeformed()) return p;
  const double root_beta = std::sqrt(params.beta());
  const double angle = root_beta * p;
  if (!(std::abs(angle) < 0.5 * std::numbers::pi)) {
    throw DomainError("momentum_map_1d: sqrt(beta)|p| = " + std::to_string(std::abs(angle)) +
                      " is outside the principal branch (< pi/2)");
  }
  return std::tan(angle) / root_beta;
}

/// P_i = p_i / sqrt(1 - beta |p|^2); requires beta |p|^2 < 1.
inline Vec3 momentum_map_3d(const Vec3& p, const DeformationParameters& params) {
  if (params.undeformed()) return p;
  const double s = params.beta() * norm2(p);
  if (!(s < 1.0)) {
    throw DomainError("momentum_map_3d: beta|p|^2 = " + std::to_string(s) + " must be < 1");
  }
  const double factor = 1.0 / std::sqrt(1.0 - s);
  return {p[0] * factor, p[1] * factor, p[2] * factor};
}

/// {X, P} = 1 + beta P^2.
inline double bracket_xp_1d(double P, const DeformationParameters& params) noexcept {
  return 1.0 + params.beta() * P * P;
}

/// {X_i, P_j} = sqrt(1 + beta |P|^2) (delta_ij + beta P_i P_j), zero-based indices.
/// {X_i, X_j} and {P_i, P_j} vanish identically.
inline double bracket_xp_3d(const Vec3& P, std::size_t i, std::size_t j,
                            const DeformationParameters& params) {
  if (i > 2 || j > 2) {
    throw std::out_of_range("bracket_xp_3d: index out of range (" + std::to_string(i) + ", " +
                            std::to_string(j) + ")");
  }
  const double beta = params.beta();
  const double delta = i == j ? 1.0 : 0.0;
  return std::sqrt(1.0 + beta * norm2(P)) * (delta + beta * P[i] * P[j]);
}

// ---------------------------------------------------------------------------
// Finite-difference Poisson brackets over canonical variables.

template <std::size_t N>
using PhaseFunction = std::function<double(const CanonicalState<N>&)>;

/// Central-difference step h = scale * max(1, |coordinate|).
struct FiniteDifference {
  double scale = std::cbrt(std::numeric_limits<double>::epsilon());

  /// Step for nested (second-derivative) evaluation.
  static FiniteDifference nested() {
    return {std::sqrt(std::sqrt(std::numeric_limits<double>::epsilon()))};
  }

  double step(double coordinate) const noexcept {
    return scale * std::max(1.0, std::abs(coordinate));
  }
};

enum class Canonical { Position, Momentum };

template <std::size_t N, class F>
double partial_derivative(const F& f, const CanonicalState<N>& state, Canonical which,
                          std::size_t index, const FiniteDifference& fd = {}) {
  auto plus = state;
  auto minus = state;
  double& up = which == Canonical::Position ? plus.x[index] : plus.p[index];
  double& down = which == Canonical::Position ? minus.x[index] : minus.p[index];
  const double centre = up;
  const double h = fd.step(centre);
  up = centre + h;
  down = centre - h;
  // Use the representable spacing, not the nominal one.
  const double width = up - down;
  const double f_plus = f(plus);
  const double f_minus = f(minus);
  if (!std::isfinite(f_plus) || !std::isfinite(f_minus)) {
    throw DomainError("numerical bracket: non-finite function value near state");
  }
  return (f_plus - f_minus) / width;
}

/// {f, g} = sum_i (df/dx_i dg/dp_i - df/dp_i dg/dx_i), O(h^2) truncation.
template <std::size_t N, class F, class G>
double numerical_bracket(const F& f, const G& g, const CanonicalState<N>& state,
                         const FiniteDifference& fd = {}) {
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double fx = partial_derivative(f, state, Canonical::Position, i, fd);
    const double fp = partial_derivative(f, state, Canonical::Momentum, i, fd);
    const double gx = partial_derivative(g, state, Canonical::Position, i, fd);
    const double gp = partial_derivative(g, state, Canonical::Momentum, i, fd);
    sum += fx * gp - fp * gx;
  }
  return sum;
}

/// The phase-space function s -> {f, g}(s).
template <std::size_t N>
PhaseFunction<N> bracket_function(PhaseFunction<N> f, PhaseFunction<N> g,
                                  FiniteDifference fd = {}) {
  return [f = std::move(f), g = std::move(g), fd](const CanonicalState<N>& s) {
    return numerical_bracket(f, g, s, fd);
  };
}

/// |{f,{g,h}} + {g,{h,f}} + {h,{f,g}}| from nested finite differences.
/// The outer level uses a wider step since it differentiates a noisy inner bracket.
template <std::size_t N>
double jacobi_residual(const PhaseFunction<N>& f, const PhaseFunction<N>& g,
                       const PhaseFunction<N>& h, const CanonicalState<N>& state,
                       const FiniteDifference& inner = {},
                       const FiniteDifference& outer = FiniteDifference::nested()) {
  const double a = numerical_bracket(f, bracket_function<N>(g, h, inner), state, outer);
  const double b = numerical_bracket(g, bracket_function<N>(h, f, inner), state, outer);
  const double c = numerical_bracket(h, bracket_function<N>(f, g, inner), state, outer);
  const double r = a + b + c;
  if (!std::isfinite(r)) throw DomainError("jacobi_residual: non-finite intermediate value");
  return std::abs(r);
}

// Deformed coordinates as phase functions, for bracket checks.

inline PhaseFunction<1> deformed_position_1d() {
  return [](const CanonicalState1D& s) { return s.x[0]; };
}

inline PhaseFunction<1> deformed_momentum_1d(DeformationParameters params) {
  return [params](const CanonicalState1D& s) { return momentum_map_1d(s.p[0], params); };
}

inline PhaseFunction<3> deformed_position_3d(std::size_t i) {
  return [i](const CanonicalState3D& s) { return s.x[i]; };
}

inline PhaseFunction<3> deformed_momentum_3d(std::size_t i, DeformationParameters params) {
  return [i, params](const CanonicalState3D& s) { return momentum_map_3d(s.p, params)[i]; };
}

}  // namespace gup
