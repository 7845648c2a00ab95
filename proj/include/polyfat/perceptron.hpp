#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "polyfat/error.hpp"
#include "polyfat/geometry.hpp"

namespace polyfat {

struct PerceptronConfig {
  /// Requested margin; a successful fit has y(w.x + b) >= target_margin / 2.
  double target_margin = 0.0;
  std::size_t max_updates = 100'000;
  bool homogenize = true;
};

struct HomogeneousFit {
  Vector w;
  std::size_t updates = 0;
};

/// Homogeneous margin Perceptron over already-signed points p (label folded
/// in). Cycles over the points in input order and updates w += p whenever
/// p.w <= threshold * ||w||; stops after a clean pass. On success every point
/// has p.w > threshold * ||w|| >= 0.
inline Result<HomogeneousFit> homogeneous_perceptron(std::span<const Vector> points, double threshold,
                                                     std::size_t max_updates) {
  if (points.empty()) throw DomainError("perceptron needs at least one point");
  if (threshold < 0.0) throw DomainError("perceptron threshold must be nonnegative");
  if (max_updates < 1) throw DomainError("perceptron needs max_updates >= 1");
  const auto dim = points.front().size();
  for (const auto& p : points) check_dim(static_cast<std::size_t>(dim), static_cast<std::size_t>(p.size()));

  Vector w = Vector::Zero(dim);
  double norm2 = 0.0;
  std::size_t updates = 0;
  for (;;) {
    bool clean = true;
    for (const auto& p : points) {
      const double s = p.dot(w);
      if (s > threshold * std::sqrt(norm2)) continue;
      if (updates == max_updates)
        return Failure{FailureKind::UpdatesExhausted,
                       "perceptron spent " + std::to_string(max_updates) + " updates without separating"};
      norm2 += 2.0 * s + p.squaredNorm();
      w += p;
      ++updates;
      clean = false;
    }
    if (clean) return HomogeneousFit{std::move(w), updates};
  }
}

struct PerceptronFit {
  Hyperplane hyperplane;
  std::size_t updates = 0;
};

/// Affine fit from points already lifted to y * (x, 1). Splits the
/// homogeneous weight into (w, b) and renormalizes so that ||w|| = 1, which
/// can only grow |w.x + b| relative to the lifted margin.
inline Result<PerceptronFit> fit_lifted(std::span<const Vector> signed_lifted, const PerceptronConfig& cfg) {
  if (cfg.target_margin < 0.0) throw DomainError("target margin must be nonnegative");
  if (!cfg.homogenize) throw DomainError("only the homogenized perceptron is implemented");
  auto fit = homogeneous_perceptron(signed_lifted, cfg.target_margin / 2.0, cfg.max_updates);
  if (!fit) return fit.failure();
  const Vector& wt = fit->w;
  const Eigen::Index d = wt.size() - 1;
  Vector w = wt.head(d);
  const double b = wt[d];
  if (w.norm() <= 1e-12 * std::abs(b)) {
    // Every label has the sign of b: return a hyperplane clear of the unit ball.
    Vector e = Vector::Zero(d);
    e[0] = 1.0;
    const double off = (b > 0 ? 1.0 : -1.0) * (1.0 + cfg.target_margin);
    return PerceptronFit{Hyperplane(std::move(e), off), fit->updates};
  }
  return PerceptronFit{Hyperplane(std::move(w), b), fit->updates};
}

inline Vector lift(const Vector& x) {
  Vector p(x.size() + 1);
  p.head(x.size()) = x;
  p[x.size()] = 1.0;
  return p;
}

/// Affine margin Perceptron: lifts each x to (x, 1) and runs the homogeneous
/// variant with threshold target/2. Presentation order is the input order.
inline Result<PerceptronFit> margin_perceptron(std::span<const LabeledPoint> sample, const PerceptronConfig& cfg) {
  if (sample.empty()) throw DomainError("perceptron needs at least one point");
  const std::size_t d = sample.front().dim();
  std::vector<Vector> lifted;
  lifted.reserve(sample.size());
  for (const auto& s : sample) {
    check_dim(d, s.dim());
    lifted.push_back(static_cast<double>(s.y()) * lift(s.x()));
  }
  return fit_lifted(lifted, cfg);
}

/// Update budget for a planted instance separable by a unit (w*, b*) with
/// |b*| <= 1 at margin gamma_star, run with target_margin < gamma_star:
/// ceil(8 / (gamma_star - target)^2). The lifted radius is at most sqrt(2)
/// and the lifted planted margin at least gamma_star / sqrt(2).
inline std::size_t perceptron_update_bound(double gamma_star, double target_margin) {
  if (!(target_margin < gamma_star)) throw DomainError("update bound needs target_margin < planted margin");
  const double gap = gamma_star - target_margin;
  return static_cast<std::size_t>(std::ceil(8.0 / (gap * gap) - 1e-9));
}

}  // namespace polyfat
