#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "polyfat/error.hpp"

namespace polyfat {

using Vector = Eigen::VectorXd;

inline constexpr double kNormTolerance = 1e-9;

enum class Label : int { Negative = -1, Positive = 1 };

inline int sign_of(Label y) { return static_cast<int>(y); }

inline Label label_from_int(int y) {
  if (y == 1) return Label::Positive;
  if (y == -1) return Label::Negative;
  throw DomainError("label must be +1 or -1, got " + std::to_string(y));
}

inline void check_dim(std::size_t expected, std::size_t got) {
  if (expected != got) throw DimensionMismatch(expected, got);
}

/// A point of the instance space (the closed unit ball) with its label.
class LabeledPoint {
 public:
  LabeledPoint(Vector x, Label y) : x_(std::move(x)), y_(y) {
    if (!x_.allFinite()) throw DomainError("point has non-finite coordinates");
    if (x_.norm() > 1.0 + kNormTolerance)
      throw DomainError("point lies outside the unit ball (norm " + std::to_string(x_.norm()) + ")");
  }

  const Vector& x() const { return x_; }
  Label label() const { return y_; }
  int y() const { return sign_of(y_); }
  std::size_t dim() const { return static_cast<std::size_t>(x_.size()); }

 private:
  Vector x_;
  Label y_;
};

using Sample = std::vector<LabeledPoint>;

/// Affine classifier x -> w.x + b with ||w|| = 1. The constructor divides
/// both w and b by ||w||, so (c*w, c*b) and (w, b) build the same object.
class Hyperplane {
 public:
  Hyperplane(Vector normal, double offset) {
    const double n = normal.norm();
    if (!std::isfinite(n) || !std::isfinite(offset))
      throw DomainError("hyperplane has non-finite coefficients");
    if (n == 0.0) throw DomainError("hyperplane normal is zero");
    normal_ = std::move(normal) / n;
    offset_ = offset / n;
  }

  const Vector& normal() const { return normal_; }
  double offset() const { return offset_; }
  std::size_t dim() const { return static_cast<std::size_t>(normal_.size()); }

  double value(const Vector& x) const {
    check_dim(dim(), static_cast<std::size_t>(x.size()));
    return normal_.dot(x) + offset_;
  }

  Hyperplane shifted(double s) const { return Hyperplane(normal_, offset_ + s, Normalized{}); }

 private:
  struct Normalized {};
  Hyperplane(Vector normal, double offset, Normalized) : normal_(std::move(normal)), offset_(offset) {}

  Vector normal_;
  double offset_ = 0.0;
};

inline double hyperplane_value(const Hyperplane& h, const Vector& x) { return h.value(x); }

/// Intersection of halfspaces {x : w_i.x + b_i >= 0}. With no halfspaces
/// the polytope is all of R^d.
class Polytope {
 public:
  explicit Polytope(std::size_t dim) : dim_(dim) {}
  Polytope(std::size_t dim, std::vector<Hyperplane> halfspaces) : dim_(dim), halfspaces_(std::move(halfspaces)) {
    for (const auto& h : halfspaces_) check_dim(dim_, h.dim());
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return halfspaces_.size(); }
  bool empty() const { return halfspaces_.empty(); }
  const std::vector<Hyperplane>& halfspaces() const { return halfspaces_; }
  const Hyperplane& operator[](std::size_t i) const { return halfspaces_[i]; }

  void add(Hyperplane h) {
    check_dim(dim_, h.dim());
    halfspaces_.push_back(std::move(h));
  }

  /// Minimum halfspace value; +infinity when there are no halfspaces.
  double min_value(const Vector& x) const {
    check_dim(dim_, static_cast<std::size_t>(x.size()));
    double m = std::numeric_limits<double>::infinity();
    for (const auto& h : halfspaces_) m = std::min(m, h.normal().dot(x) + h.offset());
    return m;
  }

  /// Index of the halfspace attaining min_value (first on ties).
  std::size_t argmin(const Vector& x) const {
    check_dim(dim_, static_cast<std::size_t>(x.size()));
    std::size_t best = 0;
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < halfspaces_.size(); ++i) {
      const double v = halfspaces_[i].normal().dot(x) + halfspaces_[i].offset();
      if (v < m) {
        m = v;
        best = i;
      }
    }
    return best;
  }

  bool contains(const Vector& x) const { return min_value(x) >= 0.0; }

 private:
  std::size_t dim_;
  std::vector<Hyperplane> halfspaces_;
};

inline double polytope_min_value(const Polytope& p, const Vector& x) { return p.min_value(x); }

enum class Region { Inside, Outside, InnerMargin, OuterMargin, InnerEnvelope, OuterEnvelope };

inline const char* to_string(Region r) {
  switch (r) {
    case Region::Inside: return "inside";
    case Region::Outside: return "outside";
    case Region::InnerMargin: return "inner_margin";
    case Region::OuterMargin: return "outer_margin";
    case Region::InnerEnvelope: return "inner_envelope";
    case Region::OuterEnvelope: return "outer_envelope";
  }
  return "unknown";
}

inline void check_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be positive");
}

// Closed intervals: min = +-gamma and min = 0 both fall in a margin band.
inline Region margin_region(const Polytope& p, double gamma, const Vector& x) {
  check_gamma(gamma);
  const double m = p.min_value(x);
  if (m > gamma) return Region::Inside;
  if (m >= 0.0) return Region::InnerMargin;
  if (m >= -gamma) return Region::OuterMargin;
  return Region::Outside;
}

/// Label of (x, y) under the gamma-fat polytope concept: -1 inside the open
/// band |min| < gamma, otherwise +1 exactly when y agrees with the side.
inline Label fat_classify(const Polytope& p, double gamma, const Vector& x, Label y) {
  check_gamma(gamma);
  const double m = p.min_value(x);
  if (std::abs(m) < gamma) return Label::Negative;
  const bool agrees = (m >= gamma && y == Label::Positive) || (m <= -gamma && y == Label::Negative);
  return agrees ? Label::Positive : Label::Negative;
}

inline bool is_consistent(const Polytope& p, double gamma, std::span<const LabeledPoint> sample) {
  if (gamma < 0.0) throw DomainError("consistency margin must be nonnegative");
  for (const auto& s : sample) {
    const double m = p.min_value(s.x());
    if (s.label() == Label::Positive ? !(m >= gamma) : !(m <= -gamma)) return false;
  }
  return true;
}

/// Moves every halfspace outward by s (inward for s < 0): b_i -> b_i + s.
inline Polytope shift(const Polytope& p, double s) {
  std::vector<Hyperplane> hs;
  hs.reserve(p.size());
  for (const auto& h : p.halfspaces()) hs.push_back(h.shifted(s));
  return Polytope(p.dim(), std::move(hs));
}

/// Axis-aligned box [-r, r]^d as 2d halfspaces (+e_1, -e_1, +e_2, ...).
inline Polytope cube(std::size_t dim, double r) {
  Polytope p(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    Vector e = Vector::Zero(static_cast<Eigen::Index>(dim));
    e[static_cast<Eigen::Index>(i)] = 1.0;
    p.add(Hyperplane(-e, r));
    p.add(Hyperplane(e, r));
  }
  return p;
}

}  // namespace polyfat
