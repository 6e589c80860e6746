#include <gtest/gtest.h>

#include <vector>

#include "kronsbl/metrics.hpp"

using namespace kronsbl;

TEST(Nmse, Examples) {
  CVector t(2), e(2);
  t << 3.0, 4.0;
  e << 3.0, 3.0;
  EXPECT_DOUBLE_EQ(nmse(t, e), 1.0 / 25.0);
  EXPECT_DOUBLE_EQ(nmse(t, t), 0.0);
  EXPECT_THROW(nmse(CVector::Zero(2), e), DegenerateInput);
  EXPECT_THROW(nmse(t, CVector::Zero(3)), DimensionError);
}

TEST(Srr, Examples) {
  const std::vector<Index> a{1, 2, 3}, b{2, 3, 4}, none;
  EXPECT_DOUBLE_EQ(srr(a, b), 0.5);
  EXPECT_DOUBLE_EQ(srr(a, a), 1.0);
  EXPECT_DOUBLE_EQ(srr(a, none), 0.0);
  EXPECT_THROW(srr(none, none), DegenerateInput);
}

TEST(Support, ThresholdAndTopK) {
  CVector x(5);
  x << 0.0, 1.0, -0.04, 0.06, Complex(0.0, -1.0);
  EXPECT_EQ(support_by_threshold(x), (std::vector<Index>{1, 3, 4}));
  EXPECT_EQ(support_by_threshold(x, 0.5), (std::vector<Index>{1, 4}));
  EXPECT_TRUE(support_by_threshold(CVector::Zero(3)).empty());
  EXPECT_EQ(support_top_k(x, 1), (std::vector<Index>{1}));
  EXPECT_EQ(support_top_k(x, 3), (std::vector<Index>{1, 3, 4}));
}

TEST(AngleMse, SortedPairing) {
  EXPECT_DOUBLE_EQ(angle_mse({0.5, -0.5}, {-0.4, 0.5}), 0.01 / 2.0);
  EXPECT_DOUBLE_EQ(angle_mse({0.1}, {0.1}), 0.0);
  EXPECT_THROW(angle_mse({0.1}, {0.1, 0.2}), DimensionError);
  EXPECT_THROW(angle_mse({}, {}), DimensionError);
}

TEST(SuccessProbability, StrictThreshold) {
  const std::vector<double> m{1e-7, 1e-6, 2e-6, 0.0};
  EXPECT_DOUBLE_EQ(success_probability(m), 0.5);
  EXPECT_DOUBLE_EQ(success_probability(m, 1.0), 1.0);
  EXPECT_THROW(success_probability(std::vector<double>{}), DimensionError);
}

TEST(ChannelNmse, MeanOverConfigurations) {
  std::vector<CMatrix> t{CMatrix::Ones(2, 2), 2.0 * CMatrix::Ones(2, 2)};
  std::vector<CMatrix> e{CMatrix::Zero(2, 2), 2.0 * CMatrix::Ones(2, 2)};
  EXPECT_DOUBLE_EQ(channel_nmse(t, e), 0.5);
  std::vector<CMatrix> bad{CMatrix::Ones(2, 3), CMatrix::Ones(2, 2)};
  EXPECT_THROW(channel_nmse(t, bad), DimensionError);
}

TEST(Summaries, MeanMedianResidual) {
  const std::vector<double> v{3.0, 1.0, 2.0, 10.0};
  EXPECT_DOUBLE_EQ(mean(v), 4.0);
  EXPECT_DOUBLE_EQ(median(v), 2.5);
  EXPECT_DOUBLE_EQ(median(std::vector<double>{5.0, 1.0, 3.0}), 3.0);
  CVector a(2), b(2);
  a << 1.0, 2.0;
  b << 1.0, Complex(2.0, 2.0);
  EXPECT_DOUBLE_EQ(residual_energy(a, b), 4.0);
}
