#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "polyfat/bounds.hpp"

using namespace polyfat;
using namespace polyfat::bounds;

TEST(Bounds, FatHyperplane) {
  EXPECT_DOUBLE_EQ(vc_fat_hyperplane(1.0), 9.0);
  EXPECT_DOUBLE_EQ(vc_fat_hyperplane(0.5), 25.0);
  EXPECT_THROW(vc_fat_hyperplane(0.0), DomainError);
}

TEST(Bounds, FatPolytopeTakesMinimum) {
  // d = 1: 2 * 2 * 1 * log2(3) against 2 * 9 * log2(3).
  EXPECT_NEAR(vc_fat_polytope(1, 1, 1.0), 4.0 * std::log2(3.0), 1e-12);
  // Large d: the margin term wins.
  EXPECT_NEAR(vc_fat_polytope(1000, 2, 1.0), 2.0 * 9.0 * 2.0 * std::log2(6.0), 1e-9);
  EXPECT_THROW(vc_fat_polytope(0, 1, 0.5), DomainError);
  EXPECT_THROW(vc_fat_polytope(1, 0, 0.5), DomainError);
}

TEST(Bounds, EnvelopeUsesSquaredMargin) {
  const double g = 0.4;
  const double v = std::pow(4.0 / (g * g) + 1.0, 2.0);
  EXPECT_NEAR(vc_envelope_polytope(100000, 3, g), 2.0 * v * 3.0 * std::log2(9.0), 1e-6 * v);
  EXPECT_DOUBLE_EQ(vc_envelope_polytope(5, 3, g), vc_fat_polytope(5, 3, g * g / 2));
  EXPECT_THROW(vc_envelope_polytope(5, 3, 1.5), DomainError);
}

TEST(Bounds, Generalization) {
  const double want = (2.0 / 1000) * (10 * std::log(2 * std::numbers::e * 100) + std::log(2 / 0.05));
  EXPECT_DOUBLE_EQ(generalization_error(1000, 10, 0.05), want);
  EXPECT_NEAR(generalization_error(1000, 10, 0.05), 0.1333, 5e-4);
  EXPECT_LT(generalization_error(2000, 10, 0.05), generalization_error(1000, 10, 0.05));
  EXPECT_THROW(generalization_error(10, 10, 0.05), DomainError);
  EXPECT_THROW(generalization_error(100, 10, 1.0), DomainError);
}

TEST(Bounds, PacSampleSize) {
  // t / (eps gamma) = 4 > e: ceil(8 ln^2 4 + ln 2).
  EXPECT_EQ(pac_sample_size(1, 0.5, 0.5, 0.5), 17u);
  EXPECT_EQ(pac_sample_size(1, 0.5, 0.5, 0.5),
            static_cast<std::size_t>(std::ceil(8 * std::pow(std::log(4.0), 2) + std::log(2.0))));
  // t / (eps gamma) < e clamps the log to 1.
  EXPECT_EQ(pac_sample_size(1, 1.0, 0.9, 0.5), static_cast<std::size_t>(std::ceil(1 / 0.9 + std::log(2.0))));
  EXPECT_GT(pac_sample_size(2, 0.3, 0.1, 0.1), pac_sample_size(1, 0.3, 0.1, 0.1));
  EXPECT_THROW(pac_sample_size(0, 0.5, 0.5, 0.5), DomainError);
  EXPECT_THROW(pac_sample_size(1, 0.5, 0.0, 0.5), DomainError);
}
