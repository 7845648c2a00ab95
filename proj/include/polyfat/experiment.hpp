#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "polyfat/error.hpp"
#include "polyfat/geometry.hpp"
#include "polyfat/parallel.hpp"
#include "polyfat/rng.hpp"
#include "polyfat/sampling.hpp"

namespace polyfat {

struct ExperimentConfig {
  std::size_t dim_lo = 2;
  std::size_t dim_hi = 20;
  std::size_t n_points = 1000;
  double margin = 0.05;
  double offset_lo = 0.05;
  double offset_hi = 0.95;
  std::size_t directions = 10'000;  // M
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  void validate() const {
    if (!(margin > 0.0)) throw DomainError("margin must be positive");
    if (!(offset_lo > 0.0 && offset_lo <= offset_hi && offset_hi < 1.0))
      throw DomainError("offset range must lie inside (0, 1)");
    if (dim_lo < 2 || dim_lo > dim_hi) throw DomainError("dimension range must start at 2 or more");
    if (directions < 1) throw DomainError("need at least one sampled direction");
  }
};

struct Instance {
  Sample points;
  Polytope target;
};

inline constexpr int kInstanceAttempts = 100;

/// d target halfspaces {x : w.x <= b} (stored as Hyperplane(-w, b)) with
/// uniform directions and offsets, then n_points uniform ball points labeled
/// by the target at the configured margin; points inside the margin band are
/// dropped.
inline Instance generate_instance(std::size_t d, const ExperimentConfig& cfg, Rng& rng) {
  if (d < 2) throw DomainError("instances need d >= 2");
  cfg.validate();
  for (int attempt = 0; attempt < kInstanceAttempts; ++attempt) {
    Rng r = rng.child(static_cast<std::uint64_t>(attempt));
    Instance inst{{}, Polytope(d)};
    for (std::size_t j = 0; j < d; ++j) {
      Vector w = sample_unit_sphere(d, r);
      const double b = cfg.offset_lo + (cfg.offset_hi - cfg.offset_lo) * r.uniform();
      inst.target.add(Hyperplane(-w, b));
    }
    for (std::size_t i = 0; i < cfg.n_points; ++i) {
      Vector x = sample_unit_ball(d, r);
      const double m = inst.target.min_value(x);
      if (m >= cfg.margin) inst.points.emplace_back(std::move(x), Label::Positive);
      else if (m <= -cfg.margin) inst.points.emplace_back(std::move(x), Label::Negative);
    }
    if (!inst.points.empty()) {
      rng = rng.child(kInstanceAttempts + 1);
      return inst;
    }
  }
  throw Error("every generated point fell inside the margin band in " + std::to_string(kInstanceAttempts) + " attempts");
}

/// Randomized cover: each round samples M unit directions w, sets b to the
/// largest w.x over the positives, and keeps the halfspace {w.x <= b} that
/// cuts off the most remaining negatives (strictly). A round that cuts none
/// is retried once with fresh directions.
inline Result<Polytope> heuristic_learn(std::span<const LabeledPoint> s, std::size_t m, Rng& rng, unsigned threads = 1) {
  if (m < 1) throw DomainError("heuristic needs at least one direction per round");
  if (s.empty()) throw DomainError("heuristic needs a nonempty sample");
  const std::size_t d = s.front().dim();
  std::vector<Vector> pos, neg;
  for (const auto& p : s) {
    check_dim(d, p.dim());
    (p.label() == Label::Positive ? pos : neg).push_back(p.x());
  }
  Polytope out(d);
  const auto dd = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd xp(dd, static_cast<Eigen::Index>(pos.size()));
  for (std::size_t i = 0; i < pos.size(); ++i) xp.col(static_cast<Eigen::Index>(i)) = pos[i];

  std::vector<char> alive(neg.size(), 1);
  std::size_t remaining = neg.size();
  std::uint64_t round = 0;
  bool retried = false;
  while (remaining > 0) {
    Rng rr = rng.child(round++);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < neg.size(); ++i)
      if (alive[i]) idx.push_back(i);
    Eigen::MatrixXd xn(dd, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) xn.col(static_cast<Eigen::Index>(i)) = neg[idx[i]];

    Eigen::MatrixXd w(static_cast<Eigen::Index>(m), dd);
    for (std::size_t j = 0; j < m; ++j) w.row(static_cast<Eigen::Index>(j)) = sample_unit_sphere(d, rr).transpose();
    std::vector<double> offset(m);
    std::vector<std::size_t> cut(m, 0);
    constexpr std::size_t chunk = 256;
    parallel_for((m + chunk - 1) / chunk, threads, [&](std::size_t c) {
      const auto lo = static_cast<Eigen::Index>(c * chunk);
      const auto len = static_cast<Eigen::Index>(std::min(chunk, m - c * chunk));
      const Eigen::MatrixXd wb = w.middleRows(lo, len);
      const Eigen::MatrixXd dp = pos.empty() ? Eigen::MatrixXd(len, 0) : Eigen::MatrixXd(wb * xp);
      const Eigen::MatrixXd dn = wb * xn;
      for (Eigen::Index j = 0; j < len; ++j) {
        const double b = pos.empty() ? -2.0 : dp.row(j).maxCoeff();
        std::size_t k = 0;
        for (Eigen::Index i = 0; i < dn.cols(); ++i) k += dn(j, i) > b;
        offset[static_cast<std::size_t>(lo + j)] = b;
        cut[static_cast<std::size_t>(lo + j)] = k;
      }
    });
    const auto best = static_cast<std::size_t>(std::max_element(cut.begin(), cut.end()) - cut.begin());
    if (cut[best] == 0) {
      if (retried)
        return Failure{FailureKind::NoProgress, "no sampled direction cuts off any of the " +
                                                    std::to_string(remaining) + " remaining negatives"};
      retried = true;
      continue;
    }
    retried = false;
    // Recompute the offset against the stored unit normal so the extreme
    // positive sits at value exactly 0 after rounding.
    const Hyperplane h0(-Vector(w.row(static_cast<Eigen::Index>(best)).transpose()), 0.0);
    double off = -2.0;
    for (const auto& x : pos) off = std::max(off, -h0.normal().dot(x));
    if (pos.empty()) off = offset[best];
    const Hyperplane h = h0.shifted(off);
    for (std::size_t i : idx)
      if (h.value(neg[i]) < 0.0) {
        alive[i] = 0;
        --remaining;
      }
    out.add(h);
  }
  if (!is_consistent(out, 0.0, s)) throw std::logic_error("heuristic produced an inconsistent polytope");
  rng = rng.child(round);
  return out;
}

struct Fig3Row {
  std::size_t d = 0;
  double mean_halfspaces = 0.0;
  double std_halfspaces = 0.0;
  std::size_t trials = 0;
  std::size_t failures = 0;
};

/// For each d in [dim_lo, dim_hi]: `trials` rounds of generate_instance and
/// heuristic_learn on per-trial streams. Mean and sample standard deviation
/// are over successful trials.
inline std::vector<Fig3Row> run_fig3(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<Fig3Row> rows;
  const Rng root(cfg.seed);
  for (std::size_t d = cfg.dim_lo; d <= cfg.dim_hi; ++d) {
    std::vector<std::size_t> counts(cfg.trials, 0);
    std::vector<char> failed(cfg.trials, 0);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
      Rng r = root.child(d).child(t);
      Rng gen = r.child(0);
      Rng learn = r.child(1);
      const Instance inst = generate_instance(d, cfg, gen);
      auto p = heuristic_learn(inst.points, cfg.directions, learn);
      if (p) counts[t] = p->size();
      else failed[t] = 1;
    });
    Fig3Row row;
    row.d = d;
    row.trials = cfg.trials;
    std::vector<double> ok;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      if (failed[t]) ++row.failures;
      else ok.push_back(static_cast<double>(counts[t]));
    }
    if (!ok.empty()) {
      double sum = 0.0;
      for (double c : ok) sum += c;
      row.mean_halfspaces = sum / static_cast<double>(ok.size());
      if (ok.size() > 1) {
        double ss = 0.0;
        for (double c : ok) ss += (c - row.mean_halfspaces) * (c - row.mean_halfspaces);
        row.std_halfspaces = std::sqrt(ss / static_cast<double>(ok.size() - 1));
      }
    }
    rows.push_back(row);
  }
  return rows;
}

struct EvalCounts {
  std::size_t true_pos = 0;
  std::size_t true_neg = 0;
  std::size_t false_pos = 0;
  std::size_t false_neg = 0;
  std::size_t margin_violations = 0;  // right side of 0 but closer than gamma
  std::size_t errors = 0;             // wrong side of 0

  std::size_t total() const { return true_pos + true_neg + false_pos + false_neg; }
  double error_rate() const { return total() ? static_cast<double>(errors) / static_cast<double>(total()) : 0.0; }
};

inline EvalCounts evaluate(const Polytope& model, std::span<const LabeledPoint> s, double gamma = 0.0) {
  if (!(gamma >= 0.0)) throw DomainError("gamma must be nonnegative");
  EvalCounts c;
  for (const auto& p : s) {
    const double m = model.min_value(p.x());
    const bool predicted_pos = m >= 0.0;
    if (p.label() == Label::Positive) {
      if (predicted_pos) {
        ++c.true_pos;
        if (m < gamma) ++c.margin_violations;
      } else {
        ++c.false_neg;
        ++c.errors;
      }
    } else {
      if (!predicted_pos) {
        ++c.true_neg;
        if (m > -gamma) ++c.margin_violations;
      } else {
        ++c.false_pos;
        ++c.errors;
      }
    }
  }
  return c;
}

}  // namespace polyfat
