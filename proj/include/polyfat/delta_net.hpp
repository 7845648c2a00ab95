#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polyfat/error.hpp"
#include "polyfat/geometry.hpp"
#include "polyfat/rng.hpp"
#include "polyfat/sampling.hpp"

namespace polyfat {

inline constexpr std::size_t kNetHardLimit = 10'000'000;

/// A delta-separated set of unit directions in R^k.
class DirectionNet {
 public:
  DirectionNet(std::size_t dim, double delta, std::vector<Vector> dirs)
      : dim_(dim), delta_(delta), dirs_(std::move(dirs)) {}

  std::size_t dim() const { return dim_; }
  double delta() const { return delta_; }
  std::size_t size() const { return dirs_.size(); }
  bool empty() const { return dirs_.empty(); }
  const std::vector<Vector>& dirs() const { return dirs_; }
  const Vector& operator[](std::size_t i) const { return dirs_[i]; }

 private:
  std::size_t dim_;
  double delta_;
  std::vector<Vector> dirs_;
};

/// Sample count ceil((1 + 2/delta)^k * k * ln(3/delta)), or nullopt when it
/// exceeds `limit`.
inline std::optional<std::size_t> default_net_samples(std::size_t k, double delta, std::size_t limit) {
  const double kd = static_cast<double>(k);
  const double log_n = kd * std::log1p(2.0 / delta) + std::log(kd) + std::log(std::log(3.0 / delta));
  if (log_n > std::log(static_cast<double>(limit))) return std::nullopt;
  const double n = std::ceil(std::exp(log_n) - 1e-9);
  if (n > static_cast<double>(limit)) return std::nullopt;
  return static_cast<std::size_t>(std::max(1.0, n));
}

namespace detail {

// Pivot index over the kept directions: each kept vector lives in the bucket
// of its nearest pivot; the triangle inequality prunes buckets that cannot
// hold a vector within delta of the query.
class PivotIndex {
 public:
  PivotIndex(std::size_t k, std::size_t n_pivots, Rng& rng) {
    for (std::size_t i = 0; i < n_pivots; ++i) pivots_.push_back(sample_unit_sphere(k, rng));
    buckets_.resize(n_pivots);
    radius_.assign(n_pivots, 0.0);
  }

  bool has_within(const Vector& q, double delta, const std::vector<Vector>& kept, std::vector<double>& dist,
                  std::vector<std::size_t>& order) const {
    const std::size_t np = pivots_.size();
    dist.resize(np);
    order.resize(np);
    for (std::size_t i = 0; i < np; ++i) dist[i] = (q - pivots_[i]).norm();
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
    for (std::size_t b : order) {
      if (buckets_[b].empty() || dist[b] - radius_[b] > delta) continue;
      for (std::size_t idx : buckets_[b])
        if ((q - kept[idx]).norm() <= delta) return true;
    }
    return false;
  }

  void insert(std::size_t idx, const Vector& v, const std::vector<double>& dist) {
    const auto b = static_cast<std::size_t>(std::min_element(dist.begin(), dist.end()) - dist.begin());
    buckets_[b].push_back(idx);
    radius_[b] = std::max(radius_[b], (v - pivots_[b]).norm());
  }

 private:
  std::vector<Vector> pivots_;
  std::vector<std::vector<std::size_t>> buckets_;
  std::vector<double> radius_;
};

}  // namespace detail

/// Randomized greedy net: draws N uniform directions and keeps each one that
/// is farther than delta from every direction kept so far.
inline DirectionNet build_net(std::size_t k, double delta, Rng& rng, std::optional<std::size_t> budget = std::nullopt,
                              std::size_t hard_limit = kNetHardLimit) {
  if (k < 1) throw DomainError("net dimension must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("net radius delta must lie in (0, 1)");
  std::size_t n_samples = 0;
  if (budget) {
    if (*budget == 0) throw DomainError("net sample budget must be positive");
    n_samples = *budget;
  } else {
    auto n = default_net_samples(k, delta, hard_limit);
    if (!n)
      throw NetOverflow("delta-net needs more than " + std::to_string(hard_limit) +
                        " samples; raise delta or lower the dimension");
    n_samples = *n;
  }
  if (n_samples > hard_limit)
    throw NetOverflow("delta-net budget " + std::to_string(n_samples) + " exceeds the hard limit; raise delta or lower the dimension");

  Rng pivot_rng = rng.child(0x5eed);
  const std::size_t n_pivots = k == 1 ? 2 : std::min<std::size_t>(256, 8 * k * k);
  detail::PivotIndex index(k, n_pivots, pivot_rng);

  std::vector<Vector> kept;
  std::vector<double> dist;
  std::vector<std::size_t> order;
  for (std::size_t s = 0; s < n_samples; ++s) {
    Vector v = sample_unit_sphere(k, rng);
    if (index.has_within(v, delta, kept, dist, order)) continue;
    index.insert(kept.size(), v, dist);
    kept.push_back(std::move(v));
  }
  return DirectionNet(k, delta, std::move(kept));
}

struct NearestDirection {
  std::size_t index;
  double distance;
};

/// Exact nearest stored direction; ties go to the lowest index.
inline NearestDirection nearest_in_net(const DirectionNet& net, const Vector& w) {
  if (net.empty()) throw DomainError("nearest_in_net on an empty net");
  check_dim(net.dim(), static_cast<std::size_t>(w.size()));
  NearestDirection best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < net.size(); ++i) {
    const double d = (net[i] - w).norm();
    if (d < best.distance) best = {i, d};
  }
  return best;
}

inline double miss_fraction(const DirectionNet& net, std::span<const Vector> probes,
                            std::optional<double> radius = std::nullopt) {
  if (probes.empty()) throw DomainError("miss_fraction needs at least one probe");
  const double r = radius.value_or(net.delta());
  std::size_t misses = 0;
  for (const auto& w : probes)
    if (nearest_in_net(net, w).distance > r) ++misses;
  return static_cast<double>(misses) / static_cast<double>(probes.size());
}

/// Fraction of fresh uniform probes whose nearest net distance exceeds
/// `radius` (defaults to the net's delta).
inline double coverage_check(const DirectionNet& net, std::size_t probes, Rng& rng,
                             std::optional<double> radius = std::nullopt) {
  if (probes < 1) throw DomainError("coverage_check needs at least one probe");
  const double r = radius.value_or(net.delta());
  std::size_t misses = 0;
  for (std::size_t p = 0; p < probes; ++p) {
    const Vector w = sample_unit_sphere(net.dim(), rng);
    if (nearest_in_net(net, w).distance > r) ++misses;
  }
  return static_cast<double>(misses) / static_cast<double>(probes);
}

}  // namespace polyfat
