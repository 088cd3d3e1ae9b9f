#pragma once

// Fourth-order central differences. Offsets are -2, -1, +1, +2 (times the
// step); the center node only enters the second-derivative stencil.

#include "kenlab/types.hpp"

#include <array>

namespace kenlab::stencil {

inline constexpr std::array<int, 4> offsets{-2, -1, 1, 2};
// Integer weights over a common divisor, so constant data cancels exactly.
inline constexpr std::array<real, 4> first{1, -8, 8, -1};
inline constexpr std::array<real, 4> second{-1, 16, 16, -1};
inline constexpr real second_center = -30;
inline constexpr real divisor = 12;

/// Derivative of s -> f(p + s*dir) at s = 0.
template <class F>
auto along(F&& f, const point& p, const vec& dir, real step) {
  using T = decltype(f(p));
  T acc = f(point(p + offsets[0] * step * dir)) * first[0];
  for (int k = 1; k < 4; ++k) acc = acc + f(point(p + offsets[k] * step * dir)) * first[k];
  return T(acc * (real(1) / (divisor * step)));
}

/// Directional derivative of f along v at p (the vector v, not a unit
/// direction). The step is scaled by the sup norm of v so that no
/// coordinate moves further than 2*step.
template <class F>
auto directional(F&& f, const point& p, const vec& v, real step) {
  using T = decltype(f(p));
  real norm = max_abs(v);
  if (norm == 0) return T(f(p) * real(0));
  return T(along(f, p, v, step / norm));
}

/// Partial derivative along coordinate c.
template <class F>
auto partial(F&& f, const point& p, int c, real step) {
  return along(f, p, basis(static_cast<int>(p.size()), c), step);
}

}  // namespace kenlab::stencil
