// Plant a 3-halfspace polytope in the unit ball, learn it back with the
// greedy cover, and score the result on fresh points.

#include <cstdio>

#include "polyfat/polyfat.hpp"

using namespace polyfat;

int main() {
  const std::size_t d = 5, t = 3, n = 300;
  const double gamma = 0.25;
  Rng rng(7);

  Polytope target(d);
  for (std::size_t i = 0; i < t; ++i) target.add(Hyperplane(-sample_unit_sphere(d, rng), 0.3 + 0.4 * rng.uniform()));

  auto draw = [&](std::size_t count) {
    Sample s;
    while (s.size() < count) {
      Vector x = sample_unit_ball(d, rng);
      const double m = target.min_value(x);
      if (m >= gamma) s.emplace_back(std::move(x), Label::Positive);
      else if (m <= -gamma) s.emplace_back(std::move(x), Label::Negative);
    }
    return s;
  };
  const Sample train = draw(n);

  LearnerConfig cfg;
  cfg.gamma = gamma;
  cfg.t_hint = t;
  cfg.candidate_budget = 10'000;
  const CandidateSet cands = build_candidates(train, cfg);
  std::printf("%zu mirrors from %zu Perceptron runs over %zu directions\n", cands.size(), cands.pairs_tried,
              cands.net_size);

  auto model = greedy_polytope(train, gamma, cands, default_greedy_cap(n, t));
  if (!model) {
    std::printf("greedy failed: %s\n", model.failure().detail.c_str());
    return 1;
  }
  const Sample test = draw(10'000);
  const EvalCounts c = evaluate(*model, test);
  std::printf("%zu halfspaces, holdout error %.4f\n", model->size(), c.error_rate());
  return 0;
}
