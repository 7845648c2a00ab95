#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polyfat/error.hpp"
#include "polyfat/geometry.hpp"
#include "polyfat/parallel.hpp"
#include "polyfat/rng.hpp"
#include "polyfat/sampling.hpp"

namespace polyfat {

/// Polytope whose halfspaces move outward, halfspace i at speed s_i:
/// offsets b_i + s_i * tau.
class ExpandingPolytope {
 public:
  ExpandingPolytope(Polytope base, std::vector<double> speeds) : base_(std::move(base)), speeds_(std::move(speeds)) {
    if (speeds_.size() != base_.size()) throw DimensionMismatch(base_.size(), speeds_.size());
    for (double s : speeds_)
      if (!(s >= 0.0)) throw DomainError("expansion speeds must be nonnegative");
  }

  static ExpandingPolytope unit_speed(Polytope base) {
    std::vector<double> s(base.size(), 1.0);
    return ExpandingPolytope(std::move(base), std::move(s));
  }

  const Polytope& base() const { return base_; }
  const std::vector<double>& speeds() const { return speeds_; }
  std::size_t dim() const { return base_.dim(); }

  Polytope at(double tau) const {
    Polytope p(base_.dim());
    for (std::size_t i = 0; i < base_.size(); ++i) p.add(base_[i].shifted(speeds_[i] * tau));
    return p;
  }

 private:
  Polytope base_;
  std::vector<double> speeds_;
};

struct ProjectionResult {
  Vector point;
  double distance = 0.0;
  std::size_t iterations = 0;
  bool converged = true;
};

inline Vector project_onto_halfspace(const Hyperplane& h, const Vector& y) {
  const double v = h.normal().dot(y) + h.offset();
  if (v >= 0.0) return y;
  return y - v * h.normal();
}

/// Nearest point of P to x by Dykstra's method over the halfspaces. Stops
/// when a full sweep moves the iterate by at most tol and the iterate violates
/// no halfspace by more than tol. Throws ProjectionFailure with the last
/// iterate after max_sweeps.
inline ProjectionResult project_onto_polytope(const Polytope& p, const Vector& x, double tol = 1e-9,
                                              std::size_t max_sweeps = 100'000) {
  check_dim(p.dim(), static_cast<std::size_t>(x.size()));
  if (p.contains(x)) return {x, 0.0, 0, true};
  if (p.size() == 1) {
    Vector y = project_onto_halfspace(p[0], x);
    const double dist = (y - x).norm();
    return {std::move(y), dist, 1, true};
  }
  const std::size_t t = p.size();
  const auto d = x.size();
  std::vector<Vector> incr(t, Vector::Zero(d));
  Vector y = x;
  Vector prev(d);
  Vector z(d);
  for (std::size_t sweep = 1; sweep <= max_sweeps; ++sweep) {
    prev = y;
    for (std::size_t i = 0; i < t; ++i) {
      z = y + incr[i];
      const Hyperplane& h = p[i];
      const double v = h.normal().dot(z) + h.offset();
      if (v < 0.0) {
        y = z - v * h.normal();
        incr[i] = v * h.normal();
      } else {
        y = z;
        incr[i].setZero();
      }
    }
    if ((y - prev).norm() <= tol && p.min_value(y) >= -tol) {
      const double dist = (y - x).norm();
      return {std::move(y), dist, sweep, true};
    }
  }
  throw ProjectionFailure("Dykstra projection did not converge in " + std::to_string(max_sweeps) +
                              " sweeps; the polytope may be empty or ill-conditioned",
                          y);
}

/// Inside, InnerEnvelope, OuterEnvelope or Outside. Inside P the distance to
/// the complement equals the min halfspace value, so no projection is needed.
inline Region envelope_region(const Polytope& p, double gamma, const Vector& x) {
  check_gamma(gamma);
  const double m = p.min_value(x);
  if (m >= 0.0) return m <= gamma ? Region::InnerEnvelope : Region::Inside;
  return project_onto_polytope(p, x).distance <= gamma ? Region::OuterEnvelope : Region::Outside;
}

namespace detail {

// Projected subgradient ascent of min_value over the ball of radius r,
// restarted from the center and random points. Returns the best point seen.
inline Vector deepest_point(const Polytope& p, double radius, Rng& rng, std::size_t starts = 16,
                            std::size_t iters = 2000) {
  const std::size_t d = p.dim();
  Vector best = Vector::Zero(static_cast<Eigen::Index>(d));
  double best_val = p.min_value(best);
  if (p.empty()) return best;
  for (std::size_t s = 0; s < starts; ++s) {
    Vector x = s == 0 ? Vector::Zero(static_cast<Eigen::Index>(d)) : Vector(radius * sample_unit_ball(d, rng));
    for (std::size_t it = 0; it < iters; ++it) {
      const std::size_t i = p.argmin(x);
      const double step = 0.5 * radius / std::sqrt(static_cast<double>(it) + 1.0);
      x += step * p[i].normal();
      const double n = x.norm();
      if (n > radius) x *= radius / n;
      const double v = p.min_value(x);
      if (v > best_val) {
        best_val = v;
        best = x;
      }
    }
  }
  return best;
}

}  // namespace detail

/// A point q with min_value(P, q) >= gamma and ||q|| <= 1, if the search finds one.
inline std::optional<Vector> find_witness(const Polytope& p, double gamma, Rng& rng) {
  Vector q = detail::deepest_point(p, 1.0, rng);
  if (p.min_value(q) >= gamma) return q;
  return std::nullopt;
}

struct CheckReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::size_t draws = 0;
};

/// Monte-Carlo check that the inner margin {0 <= min <= gamma} and the inner
/// envelope agree. Points are drawn uniformly from the ball of radius
/// `radius`. Deep points (min >= gamma) must keep x + gamma u inside P for
/// 100 random unit u; shallow points must leave P within distance gamma + tol
/// along the normal of their tightest halfspace.
inline CheckReport verify_inner_identity(const Polytope& p, double gamma, std::size_t samples, Rng& rng,
                                         double radius = 1.0, unsigned threads = 1) {
  check_gamma(gamma);
  CheckReport rep;
  if (p.empty()) return rep;
  constexpr double tol = 1e-12;
  const std::size_t d = p.dim();
  std::vector<char> checked(samples, 0), bad(samples, 0);
  parallel_for(samples, threads, [&](std::size_t i) {
    Rng r = rng.child(i);
    const Vector x = radius * sample_unit_ball(d, r);
    const double m = p.min_value(x);
    if (m < 0.0) return;
    checked[i] = 1;
    if (m >= gamma) {
      for (int k = 0; k < 100; ++k)
        if (p.min_value(x + gamma * sample_unit_sphere(d, r)) < -tol) {
          bad[i] = 1;
          return;
        }
    } else {
      const Hyperplane& h = p[p.argmin(x)];
      const double step = std::min(m + 1e-9, gamma + tol);
      if (!(p.min_value(x - step * h.normal()) < 0.0)) bad[i] = 1;
    }
  });
  rep.draws = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    rep.checked += checked[i];
    rep.violations += bad[i];
  }
  rng = rng.child(samples);
  return rep;
}

struct MarginEnvelopeReport {
  std::size_t checked = 0;     // band points tested
  std::size_t violations = 0;  // band points outside the gamma-envelope
  std::size_t draws = 0;       // ball draws spent
  Vector witness;
};

/// Monte-Carlo check that, inside the unit ball, every point of the
/// (gamma^2 / 2)-margin lies in the gamma-envelope. Needs a witness q in the
/// ball with min_value(P, q) >= gamma; one is searched for when not given.
/// Draws ball points until `samples` band points are found or `max_draws`
/// are spent; an empty band checks nothing.
inline MarginEnvelopeReport verify_margin_in_envelope(const Polytope& p, double gamma, std::size_t samples, Rng& rng,
                                                      std::optional<Vector> witness = std::nullopt,
                                                      std::optional<std::size_t> max_draws = std::nullopt,
                                                      unsigned threads = 1) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in (0, 1)");
  if (p.empty()) throw DomainError("margin-envelope check needs at least one halfspace");
  if (!witness) witness = find_witness(p, gamma, rng);
  if (!witness || witness->norm() > 1.0 + kNormTolerance || p.min_value(*witness) < gamma)
    throw DomainError("no point of the unit ball has min value >= gamma; the containment claim does not apply");
  const double band = gamma * gamma / 2.0;
  const std::size_t d = p.dim();
  const std::size_t draw_cap = max_draws.value_or(std::max<std::size_t>(samples, 1) * 2000);

  MarginEnvelopeReport rep;
  rep.witness = *witness;
  // Draw in blocks with per-block streams so the accepted set does not
  // depend on the thread count.
  constexpr std::size_t block = 4096;
  std::size_t block_index = 0;
  while (rep.checked < samples && rep.draws < draw_cap) {
    const std::size_t n = std::min(block, draw_cap - rep.draws);
    std::vector<Vector> xs(n);
    std::vector<char> in_band(n, 0);
    Rng br = rng.child(block_index++);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = sample_unit_ball(d, br);
      in_band[i] = std::abs(p.min_value(xs[i])) <= band;
    }
    rep.draws += n;
    std::vector<std::size_t> picked;
    for (std::size_t i = 0; i < n && rep.checked + picked.size() < samples; ++i)
      if (in_band[i]) picked.push_back(i);
    std::vector<char> bad(picked.size(), 0);
    parallel_for(picked.size(), threads, [&](std::size_t j) {
      const Vector& x = xs[picked[j]];
      const double m = p.min_value(x);
      if (m >= 0.0) {
        bad[j] = !(m <= gamma);
        return;
      }
      bad[j] = !(project_onto_polytope(p, x).distance <= gamma);
    });
    rep.checked += picked.size();
    for (char b : bad) rep.violations += b;
  }
  rng = rng.child(block_index);
  return rep;
}

/// True when the times at which p0 + tau v lies in Q(tau) form one
/// contiguous run of the grid.
inline bool no_reenter_check(const ExpandingPolytope& q, const Vector& p0, const Vector& v,
                             std::span<const double> times) {
  check_dim(q.dim(), static_cast<std::size_t>(p0.size()));
  check_dim(q.dim(), static_cast<std::size_t>(v.size()));
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw DomainError("time grid must be strictly increasing");
  int phase = 0;  // 0 before the run, 1 inside it, 2 after it
  for (double tau : times) {
    const bool in = q.at(tau).contains(p0 + tau * v);
    if (in && phase == 2) return false;
    if (in) phase = 1;
    else if (phase == 1) phase = 2;
  }
  return true;
}

struct HausdorffEstimate {
  double distance = 0.0;
  std::size_t samples = 0;
  Vector farthest;  // boundary point of the outer polytope attaining the estimate
};

namespace detail {

inline Polytope clip(const Polytope& p, std::optional<double> box) {
  if (!box) return p;
  Polytope out = p;
  const Polytope c = cube(p.dim(), *box);
  for (const auto& h : c.halfspaces()) out.add(h);
  return out;
}

// Distance from the interior point c along unit u to the boundary of p.
inline double exit_distance(const Polytope& p, const Vector& c, const Vector& u) {
  double t = std::numeric_limits<double>::infinity();
  for (const auto& h : p.halfspaces()) {
    const double rate = h.normal().dot(u);
    if (rate < 0.0) t = std::min(t, (h.normal().dot(c) + h.offset()) / -rate);
  }
  return t;
}

}  // namespace detail

/// Lower estimate of the Hausdorff distance between nested polytopes
/// P1 within P2: the largest distance to P1 over boundary points of P2 hit by
/// rays from an interior point of P1. The best directions are refined by
/// local random search. Both polytopes are intersected with the cube
/// [-box, box]^d when a box is given; an unbounded P2 without one throws.
inline HausdorffEstimate hausdorff_distance(const Polytope& p1, const Polytope& p2, std::size_t samples, Rng& rng,
                                            std::optional<double> box = std::nullopt, unsigned threads = 1) {
  check_dim(p1.dim(), p2.dim());
  if (samples < 1) throw DomainError("hausdorff_distance needs at least one sample");
  const std::size_t d = p1.dim();
  const Polytope a = detail::clip(p1, box);
  const Polytope b = detail::clip(p2, box);
  if (a.empty() || b.empty()) throw DomainError("hausdorff_distance needs a bounding box for a polytope with no halfspaces");

  Rng local = rng.child(0);
  double reach = box.value_or(1.0);
  for (const auto& h : b.halfspaces()) reach = std::max(reach, std::abs(h.offset()));
  const Vector c = detail::deepest_point(a, 2.0 * reach + 1.0, local);
  if (!(a.min_value(c) > 0.0)) throw DomainError("inner polytope has no interior point");

  auto score = [&](const Vector& u, Vector* at) {
    const double t = detail::exit_distance(b, c, u);
    if (!std::isfinite(t)) throw DomainError("outer polytope is unbounded; pass a sampling box");
    Vector q = c + t * u;
    const double dist = project_onto_polytope(a, q).distance;
    if (at) *at = std::move(q);
    return dist;
  };

  std::vector<Vector> dirs(samples);
  std::vector<double> dist(samples);
  parallel_for(samples, threads, [&](std::size_t i) {
    Rng r = rng.child(i + 1);
    dirs[i] = sample_unit_sphere(d, r);
    dist[i] = score(dirs[i], nullptr);
  });

  std::vector<std::size_t> order(samples);
  for (std::size_t i = 0; i < samples; ++i) order[i] = i;
  const std::size_t keep = std::min<std::size_t>(8, samples);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                    [&](std::size_t x, std::size_t y) { return dist[x] > dist[y] || (dist[x] == dist[y] && x < y); });

  std::vector<Vector> best_u(keep);
  std::vector<double> best_d(keep);
  parallel_for(keep, threads, [&](std::size_t k) {
    Rng r = rng.child(samples + 1 + k);
    Vector u = dirs[order[k]];
    double du = dist[order[k]];
    for (double step = 0.2; step > 1e-7; step *= 0.5) {
      for (int tries = 0; tries < 24; ++tries) {
        Vector cand = u + step * sample_unit_sphere(d, r);
        cand.normalize();
        const double dc = score(cand, nullptr);
        if (dc > du) {
          u = std::move(cand);
          du = dc;
        }
      }
    }
    best_u[k] = std::move(u);
    best_d[k] = du;
  });

  std::size_t arg = 0;
  for (std::size_t k = 1; k < keep; ++k)
    if (best_d[k] > best_d[arg]) arg = k;
  HausdorffEstimate est;
  est.samples = samples;
  est.distance = score(best_u[arg], &est.farthest);
  rng = rng.child(samples + 1 + keep);
  return est;
}

/// hausdorff_distance(Q(tau), Q(tau + dt)) / dt at each tau.
inline std::vector<double> hausdorff_speed_profile(const ExpandingPolytope& q, std::span<const double> times, double dt,
                                                   std::size_t samples, Rng& rng,
                                                   std::optional<double> box = std::nullopt, unsigned threads = 1) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  std::vector<double> out;
  out.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    Rng r = rng.child(i);
    out.push_back(hausdorff_distance(q.at(times[i]), q.at(times[i] + dt), samples, r, box, threads).distance / dt);
  }
  rng = rng.child(times.size());
  return out;
}

}  // namespace polyfat
