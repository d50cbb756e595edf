#pragma once

// SI constants and the effective scales that follow from a minimal length of
// order the Planck length for the electron.

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gup/errors.hpp"

namespace gup {

enum class UnitSystem { Natural, SI };

constexpr std::string_view to_string(UnitSystem units) noexcept {
  return units == UnitSystem::SI ? "SI" : "natural";
}

/// Pinned SI values; the Planck length is derived as sqrt(hbar G / c^3).
struct PhysicalConstants {
  double c;      ///< m/s
  double hbar;   ///< J s
  double G;      ///< m^3 kg^-1 s^-2
  double m_e;    ///< kg
  double l_p;    ///< m

  static constexpr std::string_view table_version = "CODATA-2018";

  static PhysicalConstants make(double c, double hbar, double G, double m_e) {
    if (!(c > 0.0 && hbar > 0.0 && G > 0.0 && m_e > 0.0)) {
      throw DomainError("physical constants must be positive");
    }
    return {c, hbar, G, m_e, std::sqrt(hbar * G / (c * c * c))};
  }

  static PhysicalConstants codata2018() {
    return make(299'792'458.0, 1.054571817e-34, 6.67430e-11, 9.1093837015e-31);
  }
};

/// Which deformed algebra fixes the ratio u = alpha / gamma.
/// OneD: u^2 = 3/(8 gamma^2). ThreeD: u^2 = 1/(4 gamma^2). General: caller-supplied alpha.
class AlgebraGeometry {
 public:
  enum class Kind { OneD, ThreeD, General };

  static AlgebraGeometry one_d() { return AlgebraGeometry(Kind::OneD, 0.0); }
  static AlgebraGeometry three_d() { return AlgebraGeometry(Kind::ThreeD, 0.0); }
  static AlgebraGeometry general(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
      throw DomainError("algebra multiplier alpha must be positive");
    }
    return AlgebraGeometry(Kind::General, alpha);
  }

  Kind kind() const noexcept { return kind_; }

  /// Coefficient k of gamma^2 in 1/u^2 = k gamma^2.
  template <class Real = double>
  Real inverse_square_coefficient() const {
    switch (kind_) {
      case Kind::OneD: return Real(8) / Real(3);
      case Kind::ThreeD: return Real(4);
      case Kind::General: break;
    }
    return Real(1) / (Real(alpha_) * Real(alpha_));
  }

  template <class Real = double>
  Real alpha() const {
    using std::sqrt;
    return Real(1) / sqrt(inverse_square_coefficient<Real>());
  }

 private:
  AlgebraGeometry(Kind kind, double alpha) : kind_(kind), alpha_(alpha) {}

  Kind kind_;
  double alpha_;
};

struct GammaEstimate {
  double gamma;    ///< s/m
  double c_gamma;  ///< dimensionless
};

/// hbar sqrt(beta) = l_p together with beta = gamma^2 / m^2 gives gamma = m l_p / hbar.
inline GammaEstimate gamma_from_planck_length(double mass, const PhysicalConstants& consts) {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw DomainError("gamma_from_planck_length: mass must be positive, got " +
                      std::to_string(mass));
  }
  const double gamma = mass * consts.l_p / consts.hbar;
  return {gamma, consts.c * gamma};
}

/// u = alpha / gamma, independent of the body's mass.
template <class Real = double>
Real effective_velocity_u(Real gamma, const AlgebraGeometry& geometry) {
  if (!(gamma > Real(0))) throw DomainError("effective_velocity_u: gamma must be positive");
  return geometry.alpha<Real>() / gamma;
}

/// 1/c_eff^2 = 1/c^2 - k gamma^2.
template <class Real = double>
Real effective_light_speed(Real gamma, const AlgebraGeometry& geometry, Real c) {
  using std::sqrt;
  if (gamma < Real(0)) throw DomainError("effective_light_speed: gamma must be non-negative");
  const Real inverse_square =
      Real(1) / (c * c) - geometry.inverse_square_coefficient<Real>() * gamma * gamma;
  if (!(inverse_square > Real(0))) {
    throw DomainError("effective_light_speed: k gamma^2 >= 1/c^2 gives an imaginary light speed");
  }
  return Real(1) / sqrt(inverse_square);
}

/// (c_eff - c)/c to first order, (k/2) c^2 gamma^2, evaluated in extended precision
/// rather than by subtracting two nearly equal speeds.
inline double light_speed_deviation(double gamma, const AlgebraGeometry& geometry, double c) {
  if (gamma < 0.0) throw DomainError("light_speed_deviation: gamma must be non-negative");
  const long double cg = static_cast<long double>(c) * static_cast<long double>(gamma);
  const long double k = geometry.inverse_square_coefficient<long double>();
  return static_cast<double>(0.5L * k * cg * cg);
}

/// Every derived scale for one body, in SI units.
struct EffectiveScales {
  double mass = 0.0;
  double gamma = 0.0;
  double c_gamma = 0.0;
  double u_1d = 0.0;
  double u_3d = 0.0;
  double c_eff_1d = 0.0;
  double c_eff_3d = 0.0;
  double deviation_1d = 0.0;
  double deviation_3d = 0.0;
};

inline EffectiveScales effective_scales(double mass, const PhysicalConstants& consts) {
  const auto [gamma, c_gamma] = gamma_from_planck_length(mass, consts);
  const auto one = AlgebraGeometry::one_d();
  const auto three = AlgebraGeometry::three_d();
  EffectiveScales s;
  s.mass = mass;
  s.gamma = gamma;
  s.c_gamma = c_gamma;
  s.u_1d = effective_velocity_u(gamma, one);
  s.u_3d = effective_velocity_u(gamma, three);
  s.c_eff_1d = effective_light_speed(gamma, one, consts.c);
  s.c_eff_3d = effective_light_speed(gamma, three, consts.c);
  s.deviation_1d = light_speed_deviation(gamma, one, consts.c);
  s.deviation_3d = light_speed_deviation(gamma, three, consts.c);
  return s;
}

}  // namespace gup
