#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>

#include "polyfat/error.hpp"

namespace polyfat::bounds {

// Log conventions: the intersection-class VC bounds use log base 2 and the
// generalization bound uses the natural log. Every O(.) constant is 1.
inline constexpr const char* kVcLogBase = "2";
inline constexpr const char* kGeneralizationLogBase = "e";
inline constexpr double kBigOConstant = 1.0;

/// VC bound for gamma-fat hyperplanes: (2/gamma + 1)^2.
inline double vc_fat_hyperplane(double gamma) {
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  const double r = 2.0 / gamma + 1.0;
  return r * r;
}

namespace detail {
inline double intersection_bound(std::size_t d, std::size_t t, double v) {
  if (d < 1) throw DomainError("dimension must be at least 1");
  if (t < 1) throw DomainError("t must be at least 1");
  const double td = static_cast<double>(t);
  const double lg = std::log2(3.0 * td);
  return std::min(2.0 * (static_cast<double>(d) + 1.0) * td * lg, 2.0 * v * td * lg);
}
}  // namespace detail

/// min(2(d+1) t log2(3t), 2 v t log2(3t)) with v = vc_fat_hyperplane(gamma).
inline double vc_fat_polytope(std::size_t d, std::size_t t, double gamma) {
  return detail::intersection_bound(d, t, vc_fat_hyperplane(gamma));
}

/// Same combination with v = (4/gamma^2 + 1)^2; identical to
/// vc_fat_polytope(d, t, gamma^2 / 2).
inline double vc_envelope_polytope(std::size_t d, std::size_t t, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("envelope gamma must lie in (0, 1]");
  return vc_fat_polytope(d, t, gamma * gamma / 2.0);
}

/// (2/m) (d_vc ln(2 e m / d_vc) + ln(2 / delta)).
inline double generalization_error(double m, double d_vc, double delta) {
  if (!(d_vc >= 1.0)) throw DomainError("VC dimension must be at least 1");
  if (!(m > d_vc)) throw DomainError("bound is vacuous unless m > d_vc");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  return (2.0 / m) * (d_vc * std::log(2.0 * std::numbers::e * m / d_vc) + std::log(2.0 / delta));
}

/// ceil((t / (eps gamma^2)) ln^2(max(t / (eps gamma), e)) + ln(1 / delta)).
inline std::size_t pac_sample_size(std::size_t t, double gamma, double eps, double delta) {
  if (t < 1) throw DomainError("t must be at least 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in (0, 1]");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  const double td = static_cast<double>(t);
  const double lg = std::log(std::max(td / (eps * gamma), std::numbers::e));
  const double m = kBigOConstant * ((td / (eps * gamma * gamma)) * lg * lg + std::log(1.0 / delta));
  return static_cast<std::size_t>(std::ceil(m));
}

}  // namespace polyfat::bounds
