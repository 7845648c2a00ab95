#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "polyfat/bounds.hpp"
#include "polyfat/delta_net.hpp"
#include "polyfat/error.hpp"
#include "polyfat/geometry.hpp"
#include "polyfat/jl.hpp"
#include "polyfat/parallel.hpp"
#include "polyfat/perceptron.hpp"
#include "polyfat/rng.hpp"

namespace polyfat {

struct LearnerConfig {
  double gamma = 0.1;
  std::optional<std::size_t> t_hint;

  // Derived from gamma unless overridden.
  std::optional<double> eps_jl_override;
  std::optional<double> delta_net_override;
  std::optional<double> offset_step_override;
  std::optional<double> mirror_threshold_override;
  std::optional<double> mirror_target_override;

  std::optional<std::size_t> greedy_iteration_cap;
  /// Upper bound on Perceptron runs (mirrors attempted). Also the net sample
  /// count; directions are consumed in net order until the runs run out.
  std::optional<std::size_t> candidate_budget;
  std::uint64_t seed = 0;

  std::size_t perceptron_max_updates = 20'000;
  std::size_t enumeration_cap = 10'000'000;
  std::size_t net_hard_limit = kNetHardLimit;
  double dedup_tolerance = 1e-6;
  unsigned threads = 1;

  double eps_jl() const { return eps_jl_override.value_or(gamma / 24.0); }
  double delta_net() const { return delta_net_override.value_or(gamma / 12.0); }
  double offset_step() const { return offset_step_override.value_or(gamma / 12.0); }
  double mirror_threshold() const { return mirror_threshold_override.value_or(3.0 * gamma / 4.0); }
  /// Perceptron target; the fit guarantees target/2 = gamma/4 on S'.
  double mirror_target() const { return mirror_target_override.value_or(gamma / 2.0); }
  double fatness() const { return gamma / 4.0; }

  void validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in (0, 1)");
    if (!(offset_step() > 0.0)) throw DomainError("offset step must be positive");
  }
};

struct MirrorProvenance {
  std::size_t net_index;
  double offset;
};

struct CandidateSet {
  std::size_t dim = 0;
  std::vector<Hyperplane> mirrors;
  std::vector<MirrorProvenance> provenance;

  std::optional<JlMap> embedding;  // unset when the identity was used

  // Diagnostics.
  std::size_t projected_dim = 0;
  bool identity_embedding = false;
  std::size_t net_size = 0;
  std::size_t offset_count = 0;
  std::size_t pairs_tried = 0;  // Perceptron runs
  std::size_t perceptron_failures = 0;

  std::size_t size() const { return mirrors.size(); }
};

/// Offsets step * i for every integer i with |step * i| <= 1 + gamma, ascending.
inline std::vector<double> offset_grid(double gamma, double step) {
  const auto half = static_cast<long>(std::floor((1.0 + gamma) / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(2 * half + 1));
  for (long i = -half; i <= half; ++i) grid.push_back(step * static_cast<double>(i));
  return grid;
}

namespace detail {

inline void check_sample(std::span<const LabeledPoint> s) {
  if (s.empty()) return;
  const std::size_t d = s.front().dim();
  for (const auto& p : s) check_dim(d, p.dim());
}

// Keeps the first of any group of mirrors within tol of each other in (w, b).
inline void dedup_mirrors(CandidateSet& c, double tol) {
  std::vector<Hyperplane> mirrors;
  std::vector<MirrorProvenance> prov;
  std::multimap<double, std::size_t> by_offset;
  for (std::size_t i = 0; i < c.mirrors.size(); ++i) {
    const auto& h = c.mirrors[i];
    bool dup = false;
    for (auto it = by_offset.lower_bound(h.offset() - tol); it != by_offset.end() && it->first <= h.offset() + tol;
         ++it) {
      const auto& k = mirrors[it->second];
      const double db = k.offset() - h.offset();
      if (std::sqrt((k.normal() - h.normal()).squaredNorm() + db * db) <= tol) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    by_offset.emplace(h.offset(), mirrors.size());
    mirrors.push_back(h);
    prov.push_back(c.provenance[i]);
  }
  c.mirrors = std::move(mirrors);
  c.provenance = std::move(prov);
}

// Bitset over the negatives of a sample.
class NegativeMask {
 public:
  explicit NegativeMask(std::size_t n = 0) : n_(n), words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  std::size_t count_and(const NegativeMask& o) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) c += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
    return c;
  }
  void remove(const NegativeMask& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  }
  void merge(const NegativeMask& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  }
  static NegativeMask full(std::size_t n) {
    NegativeMask m(n);
    for (std::size_t i = 0; i < n; ++i) m.set(i);
    return m;
  }

 private:
  std::size_t n_;
  std::vector<std::uint64_t> words_;
};

// Per-mirror view of a sample at a fixed fatness: does the mirror keep every
// positive at value >= fat, and which negatives does it push to <= -fat.
struct CoverTable {
  std::vector<std::size_t> usable;        // mirrors that keep all positives fat
  std::vector<NegativeMask> covers;       // parallel to usable
  std::size_t negatives = 0;
};

inline CoverTable cover_table(std::span<const LabeledPoint> s, double fat, std::span<const Hyperplane> mirrors,
                              unsigned threads) {
  std::vector<const Vector*> pos, neg;
  for (const auto& p : s) (p.label() == Label::Positive ? pos : neg).push_back(&p.x());
  std::vector<char> ok(mirrors.size(), 0);
  std::vector<NegativeMask> masks(mirrors.size());
  parallel_for(mirrors.size(), threads, [&](std::size_t j) {
    const auto& h = mirrors[j];
    for (const Vector* x : pos)
      if (!(h.value(*x) >= fat)) return;
    ok[j] = 1;
    NegativeMask m(neg.size());
    for (std::size_t i = 0; i < neg.size(); ++i)
      if (h.value(*neg[i]) <= -fat) m.set(i);
    masks[j] = std::move(m);
  });
  CoverTable t;
  t.negatives = neg.size();
  for (std::size_t j = 0; j < mirrors.size(); ++j)
    if (ok[j]) {
      t.usable.push_back(j);
      t.covers.push_back(std::move(masks[j]));
    }
  return t;
}

inline void assert_consistent(const Polytope& p, double fat, std::span<const LabeledPoint> s) {
  if (!is_consistent(p, fat, s)) throw std::logic_error("learner produced a polytope that is not consistent");
}

}  // namespace detail

/// Mirror generation: project the sample (JL when it reduces dimension,
/// identity otherwise), walk every (net direction, grid offset) pair, keep the
/// points the projected hyperplane classifies with |value| >= 3 gamma / 4,
/// and fit a Perceptron to them in the original space.
inline CandidateSet build_candidates(std::span<const LabeledPoint> s, const LearnerConfig& cfg) {
  cfg.validate();
  if (s.empty()) throw DomainError("build_candidates needs a nonempty sample");
  detail::check_sample(s);
  const std::size_t d = s.front().dim();
  const std::size_t n = s.size();

  Rng rng(cfg.seed);
  Rng jl_rng = rng.child(1);
  Rng net_rng = rng.child(2);

  const std::size_t k_req = required_dim(std::max<std::size_t>(2, n + cfg.t_hint.value_or(n)), cfg.eps_jl());
  CandidateSet out;
  out.dim = d;
  out.identity_embedding = k_req >= d;
  const JlMap f = out.identity_embedding ? JlMap::identity(d) : make_jl(d, k_req, jl_rng);
  if (!out.identity_embedding) out.embedding = f;
  const std::size_t k = f.target_dim();
  out.projected_dim = k;

  const std::vector<double> offsets = offset_grid(cfg.gamma, cfg.offset_step());
  out.offset_count = offsets.size();
  // Each direction yields at least one Perceptron run in practice, so a run
  // budget never needs more directions than runs.
  const DirectionNet net = build_net(k, cfg.delta_net(), net_rng, cfg.candidate_budget, cfg.net_hard_limit);

  std::vector<Vector> projected;
  std::vector<Vector> lifted;
  projected.reserve(n);
  lifted.reserve(n);
  for (const auto& p : s) {
    projected.push_back(f.apply(p.x()));
    lifted.push_back(lift(p.x()));
  }

  const double threshold = cfg.mirror_threshold();
  const PerceptronConfig pcfg{cfg.mirror_target(), cfg.perceptron_max_updates, true};

  // Pass 1: offsets worth a Perceptron run. A pair that puts a positive at
  // projected value <= -threshold is skipped: the fit would push that
  // positive to <= -target/2 and the mirror could never join a consistent
  // polytope.
  std::vector<std::vector<std::uint32_t>> live(net.size());
  parallel_for(net.size(), cfg.threads, [&](std::size_t j) {
    double low_pos = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
      if (s[i].label() == Label::Positive) low_pos = std::min(low_pos, net[j].dot(projected[i]));
    for (std::size_t o = 0; o < offsets.size(); ++o)
      if (low_pos + offsets[o] > -threshold) live[j].push_back(static_cast<std::uint32_t>(o));
  });
  std::size_t used = net.size();
  if (cfg.candidate_budget) {
    std::size_t runs = 0;
    for (std::size_t j = 0; j < net.size(); ++j) {
      const std::size_t room = *cfg.candidate_budget - runs;
      if (live[j].size() >= room) {
        live[j].resize(room);
        used = j + 1;
        break;
      }
      runs += live[j].size();
    }
  }
  out.net_size = used;

  struct Slot {
    std::vector<Hyperplane> mirrors;
    std::vector<MirrorProvenance> prov;
    std::size_t failed = 0;
  };
  std::vector<Slot> slots(used);
  parallel_for(used, cfg.threads, [&](std::size_t j) {
    const Vector& v = net[j];
    std::vector<double> pv(n);
    for (std::size_t i = 0; i < n; ++i) pv[i] = v.dot(projected[i]);
    std::vector<Vector> chosen;
    chosen.reserve(n);
    Slot& slot = slots[j];
    for (std::uint32_t o : live[j]) {
      const double b = offsets[o];
      chosen.clear();
      for (std::size_t i = 0; i < n; ++i) {
        const double z = pv[i] + b;
        if (z >= threshold) chosen.push_back(lifted[i]);
        else if (z <= -threshold) chosen.push_back(-lifted[i]);
      }
      if (chosen.empty()) continue;
      auto fit = fit_lifted(chosen, pcfg);
      if (!fit) {
        ++slot.failed;
        continue;
      }
      slot.mirrors.push_back(fit->hyperplane);
      slot.prov.push_back({j, b});
    }
  });
  for (std::size_t j = 0; j < used; ++j) {
    auto& slot = slots[j];
    out.pairs_tried += live[j].size();
    out.perceptron_failures += slot.failed;
    for (std::size_t i = 0; i < slot.mirrors.size(); ++i) {
      out.mirrors.push_back(std::move(slot.mirrors[i]));
      out.provenance.push_back(slot.prov[i]);
    }
  }
  detail::dedup_mirrors(out, cfg.dedup_tolerance);
  return out;
}

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

/// First t-subset of mirrors (lexicographic in candidate index) that forms a
/// consistent gamma/4-fat polytope on s.
inline Result<Polytope> enumerate_t_polytope(std::span<const LabeledPoint> s, double gamma, std::size_t t,
                                             const CandidateSet& c, std::size_t cap = 10'000'000,
                                             unsigned threads = 1) {
  if (t < 1) throw DomainError("enumeration needs t >= 1");
  check_gamma(gamma);
  detail::check_sample(s);
  if (binomial(c.size(), t) > static_cast<double>(cap))
    throw CombinatorialBlowup("C(" + std::to_string(c.size()) + ", " + std::to_string(t) +
                              ") exceeds the enumeration cap; shrink the candidate set or use the greedy learner");
  const double fat = gamma / 4.0;
  const auto table = detail::cover_table(s, fat, c.mirrors, threads);
  const std::size_t u = table.usable.size();
  // Subsets containing a mirror that cuts into the positives are never
  // consistent, so walking only the usable mirrors keeps lexicographic order.
  if (u >= t) {
    std::vector<std::size_t> idx(t);
    for (std::size_t i = 0; i < t; ++i) idx[i] = i;
    for (;;) {
      detail::NegativeMask acc(table.negatives);
      for (std::size_t i : idx) acc.merge(table.covers[i]);
      if (acc.count() == table.negatives) {
        Polytope p(c.dim);
        for (std::size_t i : idx) p.add(c.mirrors[table.usable[i]]);
        detail::assert_consistent(p, fat, s);
        return p;
      }
      std::size_t i = t;
      while (i > 0 && idx[i - 1] == u - t + (i - 1)) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < t; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return Failure{FailureKind::NotFound, "no " + std::to_string(t) + "-subset of " + std::to_string(c.size()) +
                                            " mirrors is consistent at margin gamma/4"};
}

/// Iteration cap: max(64, ceil(3 t ln n)) with a t hint, 8 ceil(ln^2 n) without.
inline std::size_t default_greedy_cap(std::size_t n, std::optional<std::size_t> t_hint) {
  const double ln = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  if (t_hint) return std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(3.0 * *t_hint * ln)));
  return 8 * static_cast<std::size_t>(std::ceil(ln * ln));
}

/// Greedy cover: repeatedly append the mirror that keeps every positive at
/// value >= gamma/4 and pushes the most remaining negatives to <= -gamma/4.
inline Result<Polytope> greedy_polytope(std::span<const LabeledPoint> s, double gamma, const CandidateSet& c,
                                        std::optional<std::size_t> iteration_cap = std::nullopt, unsigned threads = 1) {
  check_gamma(gamma);
  detail::check_sample(s);
  const std::size_t dim = s.empty() ? c.dim : s.front().dim();
  const std::size_t cap = iteration_cap.value_or(default_greedy_cap(s.size(), std::nullopt));
  const double fat = gamma / 4.0;
  Polytope p(dim);
  std::size_t negatives = 0;
  for (const auto& x : s) negatives += x.label() == Label::Negative;
  if (negatives == 0) return p;

  const auto table = detail::cover_table(s, fat, c.mirrors, threads);
  auto alive = detail::NegativeMask::full(table.negatives);
  std::size_t remaining = table.negatives;
  while (remaining > 0) {
    if (p.size() == cap)
      return Failure{FailureKind::IterationCap, "greedy cover hit its cap of " + std::to_string(cap) + " halfspaces with " +
                                                     std::to_string(remaining) + " negatives left"};
    std::size_t best = 0, best_count = 0;
    for (std::size_t i = 0; i < table.usable.size(); ++i) {
      const std::size_t cnt = table.covers[i].count_and(alive);
      if (cnt > best_count) {
        best_count = cnt;
        best = i;
      }
    }
    if (best_count == 0)
      return Failure{FailureKind::NoProgress,
                     "no mirror separates any of the " + std::to_string(remaining) + " remaining negatives"};
    alive.remove(table.covers[best]);
    remaining -= best_count;
    p.add(c.mirrors[table.usable[best]]);
  }
  detail::assert_consistent(p, fat, s);
  return p;
}

/// build_candidates followed by greedy_polytope with the configured cap.
inline Result<Polytope> learn_greedy(std::span<const LabeledPoint> s, const LearnerConfig& cfg) {
  const auto c = build_candidates(s, cfg);
  const auto cap = cfg.greedy_iteration_cap.value_or(default_greedy_cap(s.size(), cfg.t_hint));
  return greedy_polytope(s, cfg.gamma, c, cap, cfg.threads);
}

struct PacOutcome {
  std::size_t sample_size = 0;
  Sample sample;
  Result<Polytope> model = Failure{FailureKind::NotFound, "not run"};
};

using ExampleSource = std::function<LabeledPoint(Rng&)>;

/// Draws bounds::pac_sample_size(t, gamma, eps, delta) examples from `source`
/// and learns a consistent gamma/4-fat polytope with the greedy learner.
inline PacOutcome learn_pac(std::size_t t, double gamma, double eps, double delta, const ExampleSource& source,
                            Rng& rng, LearnerConfig cfg = {}) {
  PacOutcome out;
  out.sample_size = bounds::pac_sample_size(t, gamma, eps, delta);
  out.sample.reserve(out.sample_size);
  for (std::size_t i = 0; i < out.sample_size; ++i) out.sample.push_back(source(rng));
  cfg.gamma = gamma;
  cfg.t_hint = t;
  out.model = learn_greedy(out.sample, cfg);
  return out;
}

}  // namespace polyfat
