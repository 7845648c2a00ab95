#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "polyfat/experiment.hpp"

using namespace polyfat;

TEST(GenerateInstance, LabelsRespectMargin) {
  ExperimentConfig cfg;
  cfg.n_points = 500;
  Rng r(1);
  const Instance inst = generate_instance(4, cfg, r);
  EXPECT_EQ(inst.target.size(), 4u);
  EXPECT_LE(inst.points.size(), 500u);
  for (const auto& h : inst.target.halfspaces()) {
    EXPECT_GE(h.offset(), cfg.offset_lo);
    EXPECT_LE(h.offset(), cfg.offset_hi);
  }
  for (const auto& p : inst.points) {
    const double m = inst.target.min_value(p.x());
    EXPECT_GE(p.y() * m, cfg.margin);
    EXPECT_LE(p.x().norm(), 1.0);
  }
  EXPECT_THROW(generate_instance(1, cfg, r), DomainError);
}

TEST(Heuristic, ConsistentAndDeterministic) {
  ExperimentConfig cfg;
  cfg.n_points = 300;
  Rng g(2);
  const Instance inst = generate_instance(3, cfg, g);
  Rng a(9), b(9);
  const auto p = heuristic_learn(inst.points, 2000, a, 1);
  const auto q = heuristic_learn(inst.points, 2000, b, 4);
  ASSERT_TRUE(p.ok());
  ASSERT_TRUE(q.ok());
  EXPECT_TRUE(is_consistent(*p, 0.0, inst.points));
  ASSERT_EQ(p->size(), q->size());
  for (std::size_t i = 0; i < p->size(); ++i) EXPECT_EQ((*p)[i].normal(), (*q)[i].normal());
}

TEST(Heuristic, AllPositive) {
  Rng r(3);
  const Sample s = {LabeledPoint(Vector{{0.1, 0.1}}, Label::Positive)};
  const auto p = heuristic_learn(s, 10, r);
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(p->size(), 0u);
}

TEST(Heuristic, UnseparableFails) {
  Rng r(4);
  const Sample s = {LabeledPoint(Vector{{0.5, 0}}, Label::Positive), LabeledPoint(Vector{{-0.5, 0}}, Label::Positive),
                    LabeledPoint(Vector{{0, 0}}, Label::Negative)};
  const auto p = heuristic_learn(s, 500, r);
  ASSERT_FALSE(p.ok());
  EXPECT_EQ(p.failure().kind, FailureKind::NoProgress);
}

TEST(Fig3, SmallRunIsReproducible) {
  ExperimentConfig cfg;
  cfg.dim_lo = 2;
  cfg.dim_hi = 3;
  cfg.n_points = 200;
  cfg.directions = 500;
  cfg.trials = 6;
  const auto a = run_fig3(cfg);
  cfg.threads = 3;
  const auto b = run_fig3(cfg);
  ASSERT_EQ(a.size(), 2u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].d, 2 + i);
    EXPECT_EQ(a[i].mean_halfspaces, b[i].mean_halfspaces);
    EXPECT_EQ(a[i].std_halfspaces, b[i].std_halfspaces);
    EXPECT_EQ(a[i].failures, b[i].failures);
    EXPECT_GT(a[i].mean_halfspaces, 0.0);
  }
}

TEST(Evaluate, Counts) {
  const Polytope p = cube(1, 0.5);
  const Sample s = {LabeledPoint(Vector{{0}}, Label::Positive), LabeledPoint(Vector{{0.45}}, Label::Positive),
                    LabeledPoint(Vector{{0.9}}, Label::Positive), LabeledPoint(Vector{{0.2}}, Label::Negative),
                    LabeledPoint(Vector{{0.55}}, Label::Negative)};
  const auto c = evaluate(p, s, 0.1);
  EXPECT_EQ(c.true_pos, 2u);
  EXPECT_EQ(c.false_neg, 1u);
  EXPECT_EQ(c.false_pos, 1u);
  EXPECT_EQ(c.true_neg, 1u);
  EXPECT_EQ(c.errors, 2u);
  EXPECT_EQ(c.margin_violations, 2u);
  EXPECT_DOUBLE_EQ(c.error_rate(), 0.4);
}
