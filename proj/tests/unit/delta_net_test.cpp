#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "polyfat/delta_net.hpp"

using namespace polyfat;

namespace {

void expect_separated(const DirectionNet& net) {
  for (std::size_t i = 0; i < net.size(); ++i) {
    ASSERT_NEAR(net[i].norm(), 1.0, 1e-9);
    for (std::size_t j = i + 1; j < net.size(); ++j) ASSERT_GT((net[i] - net[j]).norm(), net.delta());
  }
}

}  // namespace

TEST(BuildNet, ZeroSphereHasBothPoles) {
  Rng r(0);
  const DirectionNet net = build_net(1, 0.5, r);
  ASSERT_EQ(net.size(), 2u);
  EXPECT_NE(net[0][0], net[1][0]);
  EXPECT_EQ(std::abs(net[0][0]), 1.0);
  const auto hit = nearest_in_net(net, Vector{{1.0}});
  EXPECT_EQ(net[hit.index][0], 1.0);
  EXPECT_EQ(hit.distance, 0.0);
}

TEST(BuildNet, SizeBoundAndSeparation) {
  Rng r(1);
  const DirectionNet net = build_net(3, 0.5, r);
  EXPECT_LE(net.size(), 125u);
  expect_separated(net);
}

TEST(BuildNet, SampleCountFormula) {
  const auto n = default_net_samples(3, 0.5, kNetHardLimit);
  ASSERT_TRUE(n.has_value());
  EXPECT_EQ(*n, static_cast<std::size_t>(std::ceil(125.0 * 3.0 * std::log(6.0))));
  EXPECT_FALSE(default_net_samples(40, 0.1, kNetHardLimit).has_value());
}

TEST(BuildNet, Errors) {
  Rng r(2);
  EXPECT_THROW(build_net(3, 0.5, r, std::size_t{0}), DomainError);
  EXPECT_THROW(build_net(30, 0.05, r), NetOverflow);
  EXPECT_THROW(build_net(3, 0.5, r, std::size_t{100}, 50), NetOverflow);
  EXPECT_THROW(build_net(0, 0.5, r), DomainError);
  EXPECT_THROW(build_net(2, 1.5, r), DomainError);
}

TEST(NearestInNet, MembersAndTies) {
  const DirectionNet net(2, 0.5, {Vector{{1, 0}}, Vector{{0, 1}}, Vector{{-1, 0}}});
  EXPECT_EQ(nearest_in_net(net, Vector{{0, 1}}).index, 1u);
  const Vector mid = Vector{{1, 1}}.normalized();
  EXPECT_EQ(nearest_in_net(net, mid).index, 0u);
  EXPECT_THROW(nearest_in_net(DirectionNet(2, 0.5, {}), mid), DomainError);
  EXPECT_EQ(miss_fraction(net, net.dirs()), 0.0);
}

namespace {

void expect_default_coverage(std::size_t k, double delta) {
  Rng r(k);
  const DirectionNet net = build_net(k, delta, r);
  expect_separated(net);
  Rng probes(100 + k);
  const double miss = coverage_check(net, 10000, probes);
  EXPECT_LE(miss, 0.01) << "k=" << k;
  Rng again(100 + k);
  EXPECT_LE(coverage_check(net, 10000, again, 2 * delta), miss);
}

}  // namespace

TEST(Coverage, DefaultBudget) {
  expect_default_coverage(3, 0.3);
  expect_default_coverage(5, 0.3);
}

TEST(Coverage, DefaultBudgetEightDims) {
  const auto n = default_net_samples(8, 0.5, kNetHardLimit);
  if (!n || *n > 2'000'000) GTEST_SKIP() << "k=8 default budget is too large for a unit test";
  expect_default_coverage(8, 0.5);
}

TEST(Coverage, DotProductTransfer) {
  Rng r(7);
  const DirectionNet net = build_net(4, 0.4, r);
  for (int i = 0; i < 200; ++i) {
    const Vector w = sample_unit_sphere(4, r);
    const auto hit = nearest_in_net(net, w);
    for (int j = 0; j < 100; ++j) {
      const Vector x = sample_unit_sphere(4, r);
      ASSERT_LE(std::abs(w.dot(x) - net[hit.index].dot(x)), hit.distance + 1e-12);
    }
  }
}
