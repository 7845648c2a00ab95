#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "polyfat/jl.hpp"
#include "polyfat/sampling.hpp"

using namespace polyfat;

TEST(RequiredDim, PlugIn) {
  EXPECT_EQ(required_dim(100, 0.2), 922u);
  EXPECT_GE(required_dim(2, 0.99), 1u);
  EXPECT_EQ(required_dim(2, 0.99), static_cast<std::size_t>(std::ceil(8 * std::log(2.0) / (0.99 * 0.99))));
  std::size_t prev = required_dim(50, 0.05);
  for (double e = 0.1; e < 0.99; e += 0.05) {
    const std::size_t k = required_dim(50, e);
    EXPECT_LE(k, prev);
    prev = k;
  }
  EXPECT_THROW(required_dim(10, 1.0), DomainError);
  EXPECT_THROW(required_dim(10, 0.0), DomainError);
  EXPECT_THROW(required_dim(1, 0.5), DomainError);
}

TEST(MakeJl, ShapeAndDeterminism) {
  Rng a(1), b(1);
  const JlMap f = make_jl(7, 3, a), g = make_jl(7, 3, b);
  EXPECT_EQ(f.target_dim(), 3u);
  EXPECT_EQ(f.source_dim(), 7u);
  EXPECT_EQ(f.matrix(), g.matrix());
}

TEST(MakeJl, NormPreservedOnAverage) {
  Vector x = Vector::Zero(10);
  x[0] = 0.6;
  x[3] = -0.8;
  double ratio = 0.0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    Rng r(s);
    ratio += make_jl(10, 20, r).apply(x).squaredNorm() / x.squaredNorm();
  }
  EXPECT_NEAR(ratio / 1000, 1.0, 0.05);
}

TEST(Apply, Linear) {
  Rng r(2);
  const JlMap f = make_jl(6, 4, r);
  EXPECT_EQ(f.apply(Vector::Zero(6)), Vector::Zero(4));
  for (int i = 0; i < 100; ++i) {
    const Vector x = sample_unit_ball(6, r), y = sample_unit_ball(6, r);
    const double a = r.gaussian(), b = r.gaussian();
    EXPECT_LE((f.apply(a * x + b * y) - a * f.apply(x) - b * f.apply(y)).norm(), 1e-10);
  }
  EXPECT_THROW(f.apply(Vector::Zero(5)), DimensionMismatch);
  EXPECT_EQ(apply(JlMap::identity(3), Vector{{1, 2, 3}}), (Vector{{1, 2, 3}}));
}

TEST(CheckDotProducts, Trivial) {
  Rng r(3);
  const JlMap f = make_jl(8, 5, r);
  std::vector<Vector> pts = {sample_unit_ball(8, r)};
  EXPECT_EQ(check_dot_products(f, pts, {}, 0.1), 0.0);
  std::vector<Vector> normals;
  for (int i = 0; i < 10; ++i) normals.push_back(sample_unit_sphere(8, r));
  const JlMap g = make_jl(8, 400, r);
  for (int i = 0; i < 50; ++i) pts.push_back(sample_unit_ball(8, r));
  EXPECT_EQ(check_dot_products(g, pts, normals, 2.0), 0.0);
}

TEST(CheckDotProducts, DistortionBoundAtConstant) {
  const double eps = 0.2;
  const std::size_t d = 20, n = 200, m = 10;
  const std::size_t k = required_dim(n + m, eps);
  int good = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng r(seed);
    std::vector<Vector> pts, normals;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(sample_unit_ball(d, r));
    for (std::size_t i = 0; i < m; ++i) normals.push_back(sample_unit_sphere(d, r));
    const JlMap f = make_jl(d, k, r);
    good += check_dot_products(f, pts, normals, eps) <= 0.01;
  }
  EXPECT_GE(good, 18);
}
