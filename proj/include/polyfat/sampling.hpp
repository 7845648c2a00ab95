#pragma once

#include <cmath>
#include <cstddef>

#include "polyfat/error.hpp"
#include "polyfat/geometry.hpp"
#include "polyfat/rng.hpp"

namespace polyfat {

inline Vector sample_gaussian_vector(std::size_t d, Rng& rng) {
  if (d == 0) throw DomainError("dimension must be at least 1");
  Vector v(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.gaussian();
  return v;
}

/// Uniform direction: normalized Gaussian vector. A zero draw is redrawn.
inline Vector sample_unit_sphere(std::size_t d, Rng& rng) {
  for (;;) {
    Vector v = sample_gaussian_vector(d, rng);
    const double n = v.norm();
    if (n > 0.0 && std::isfinite(n)) return v / n;
  }
}

/// Uniform in the unit ball: a uniform direction scaled to radius u^(1/d).
inline Vector sample_unit_ball(std::size_t d, Rng& rng) {
  Vector v = sample_unit_sphere(d, rng);
  const double r = std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
  return v * r;
}

}  // namespace polyfat
