#pragma once

#include <cstddef>

#include "gup/deformed_algebra.hpp"

namespace gup {

/// Spacetime point (t, x) in some frame of reference.
template <std::size_t N>
struct Event {
  double t = 0.0;
  Vec<N> x{};

  friend bool operator==(const Event&, const Event&) = default;
};

using Event1D = Event<1>;
using Event3D = Event<3>;

/// ds^2 = u^2 dt^2 + sum dx_i^2, all signs positive.
template <std::size_t N>
double euclidean_interval(const Event<N>& a, const Event<N>& b, double u) noexcept {
  const double dt = b.t - a.t;
  double s = u * u * dt * dt;
  for (std::size_t i = 0; i < N; ++i) {
    const double dx = b.x[i] - a.x[i];
    s += dx * dx;
  }
  return s;
}

}  // namespace gup
