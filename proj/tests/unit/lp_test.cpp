#include <cmath>

#include <gtest/gtest.h>

#include "polyfat/lp.hpp"
#include "polyfat/sampling.hpp"

using namespace polyfat;

namespace {

StrictLp make(std::initializer_list<std::initializer_list<double>> a, std::initializer_list<double> b) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(a.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : a) {
    Eigen::Index c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  Vector v(static_cast<Eigen::Index>(b.size()));
  Eigen::Index i = 0;
  for (double x : b) v[i++] = x;
  return StrictLp(m, v);
}

}  // namespace

TEST(StrictSolve, Interval) {
  const auto r = lp_strict_solve(make({{1}, {-1}}, {1, 1}), perceptron_separator());
  ASSERT_TRUE(r.solved());
  EXPECT_LT(std::abs(r.x[0]), 1.0);
  EXPECT_EQ(r.oracle_calls, 1u);
}

TEST(StrictSolve, Infeasible) {
  const auto r = lp_strict_solve(make({{1}, {-1}}, {0, 0}), perceptron_separator(5000));
  EXPECT_EQ(r.status, LpStatus::InfeasibleOrTimeout);
  const auto z = lp_strict_solve(make({{0}}, {0}), perceptron_separator());
  EXPECT_EQ(z.status, LpStatus::InfeasibleOrTimeout);
}

TEST(Solve, ForcedEquality) {
  const auto r = lp_solve(make({{1}, {-1}}, {1, -1}), perceptron_strict_solver());
  ASSERT_TRUE(r.solved()) << r.detail;
  EXPECT_NEAR(r.x[0], 1.0, 1e-9);
  EXPECT_GE(r.oracle_calls, 2u);
}

TEST(Solve, Infeasible) {
  const auto r = lp_solve(make({{1}, {-1}}, {0, -1}), perceptron_strict_solver(5000));
  EXPECT_EQ(r.status, LpStatus::InfeasibleOrTimeout);
}

TEST(Solve, ZeroRows) {
  EXPECT_TRUE(lp_solve(make({{0, 0}}, {0}), perceptron_strict_solver()).solved());
  EXPECT_EQ(lp_solve(make({{0, 0}}, {-1}), perceptron_strict_solver()).status, LpStatus::InfeasibleOrTimeout);
}

TEST(Solve, TinyPivotIsDegenerate) {
  const auto r = lp_solve(make({{1e-12}, {-1e-12}}, {0, 0}), perceptron_strict_solver());
  EXPECT_EQ(r.status, LpStatus::Degenerate);
  EXPECT_STREQ(to_string(r.status), "degenerate");
}

TEST(Solve, PlantedWithEqualities) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const Eigen::Index n = 3, m = 8;
    const Vector x0 = sample_unit_ball(3, rng);
    Eigen::MatrixXd a(m + 2, n);
    Vector b(m + 2);
    for (Eigen::Index i = 0; i < m; ++i) {
      a.row(i) = sample_unit_sphere(3, rng).transpose();
      b[i] = a.row(i).dot(x0) + 0.1 + rng.uniform();
    }
    // Pin one direction: c.x <= c.x0 and -c.x <= -c.x0.
    const Vector c = sample_unit_sphere(3, rng);
    a.row(m) = c.transpose();
    b[m] = c.dot(x0);
    a.row(m + 1) = -c.transpose();
    b[m + 1] = -c.dot(x0);
    const auto r = lp_solve(StrictLp(a, b), perceptron_strict_solver());
    ASSERT_TRUE(r.solved()) << "seed " << seed << ": " << r.detail;
    EXPECT_LE((a * r.x - b).maxCoeff(), 1e-8);
  }
}

TEST(StrictLp, Validation) {
  EXPECT_THROW(StrictLp(Eigen::MatrixXd::Zero(2, 1), Vector::Zero(3)), DimensionMismatch);
  Eigen::MatrixXd bad(1, 1);
  bad(0, 0) = std::nan("");
  EXPECT_THROW(StrictLp(bad, Vector::Zero(1)), DomainError);
}
