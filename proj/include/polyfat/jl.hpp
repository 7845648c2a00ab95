#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include <Eigen/Core>

#include "polyfat/error.hpp"
#include "polyfat/geometry.hpp"
#include "polyfat/rng.hpp"

namespace polyfat {

/// Leading constant of the target dimension k = ceil(C ln n / eps^2).
inline constexpr double kJlConstant = 8.0;

inline std::size_t required_dim(std::size_t n, double eps) {
  if (n < 2) throw DomainError("required_dim needs at least two points");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("JL distortion must lie in (0, 1)");
  const double k = std::ceil(kJlConstant * std::log(static_cast<double>(n)) / (eps * eps));
  return std::max<std::size_t>(1, static_cast<std::size_t>(k));
}

/// Dense linear map R^d -> R^k.
class JlMap {
 public:
  explicit JlMap(Eigen::MatrixXd m) : m_(std::move(m)) {
    if (m_.rows() < 1 || m_.cols() < 1) throw DomainError("JL map needs positive dimensions");
    if (!m_.allFinite()) throw DomainError("JL map has non-finite entries");
  }

  static JlMap identity(std::size_t d) {
    return JlMap(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
  }

  std::size_t source_dim() const { return static_cast<std::size_t>(m_.cols()); }
  std::size_t target_dim() const { return static_cast<std::size_t>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }

  Vector apply(const Vector& x) const {
    check_dim(source_dim(), static_cast<std::size_t>(x.size()));
    return m_ * x;
  }

 private:
  Eigen::MatrixXd m_;
};

/// Entries i.i.d. N(0, 1/k), filled row by row from the generator.
inline JlMap make_jl(std::size_t d, std::size_t k, Rng& rng) {
  if (d < 1 || k < 1) throw DomainError("JL map needs d, k >= 1");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.gaussian() * scale;
  return JlMap(std::move(m));
}

inline Vector apply(const JlMap& f, const Vector& x) { return f.apply(x); }

/// Fraction of pairs (x, t) whose projected dot product misses t.x by more
/// than eps.
inline double check_dot_products(const JlMap& f, std::span<const Vector> points, std::span<const Vector> normals,
                                 double eps) {
  if (points.empty() || normals.empty()) return 0.0;
  std::vector<Vector> fp;
  fp.reserve(points.size());
  for (const auto& x : points) fp.push_back(f.apply(x));
  std::size_t failures = 0;
  for (const auto& t : normals) {
    const Vector ft = f.apply(t);
    for (std::size_t i = 0; i < points.size(); ++i)
      if (std::abs(ft.dot(fp[i]) - t.dot(points[i])) > eps) ++failures;
  }
  return static_cast<double>(failures) / static_cast<double>(points.size() * normals.size());
}

}  // namespace polyfat
