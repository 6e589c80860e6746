#include <gtest/gtest.h>

#include <random>

#include "kronsbl/omp.hpp"

using namespace kronsbl;

namespace {

CMatrix random_matrix(std::mt19937_64& rng, Index r, Index c) {
  std::normal_distribution<double> nd;
  CMatrix a(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) a(i, j) = Complex(nd(rng), nd(rng));
  return a;
}

double ls_residual(const CVector& y, const CMatrix& h, const std::vector<Index>& cols) {
  const CMatrix a = h(Eigen::all, cols);
  const CVector x = a.colPivHouseholderQr().solve(y);
  return (y - a * x).norm();
}

}  // namespace

TEST(Omp, RecoversExactSparseVector) {
  std::mt19937_64 rng(21);
  const CMatrix h = random_matrix(rng, 30, 60);
  CVector x = CVector::Zero(60);
  x(4) = Complex(1.0, 2.0);
  x(17) = Complex(-3.0, 0.5);
  x(51) = Complex(0.7, -1.1);
  const CVector y = h * x;
  OmpConfig cfg;
  cfg.sparsity = 3;
  const OmpResult r = omp(y, h, cfg);
  EXPECT_TRUE(r.coefficients.isApprox(x, 1e-10));
  std::vector<Index> s = r.support;
  std::sort(s.begin(), s.end());
  EXPECT_EQ(s, (std::vector<Index>{4, 17, 51}));
  ASSERT_EQ(r.residual_norms.size(), 4u);
  EXPECT_LT(r.residual_norms.back(), 1e-10 * y.norm());
}

TEST(Omp, TwoStepsMatchDirectComputation) {
  // Oracle: correlate, project out the first atom explicitly, correlate again,
  // then refit the pair with a QR least-squares solve.
  std::mt19937_64 rng(22);
  for (int rep = 0; rep < 10; ++rep) {
    const CMatrix h = random_matrix(rng, 8, 12);
    const CVector y = random_matrix(rng, 8, 1).col(0);
    const RVector norms = h.colwise().norm().transpose();
    Index first = 0;
    (h.adjoint() * y).cwiseAbs().cwiseQuotient(norms).maxCoeff(&first);
    const CVector a = h.col(first);
    const CVector r1 = y - a * (a.dot(y) / a.squaredNorm());
    RVector score = (h.adjoint() * r1).cwiseAbs().cwiseQuotient(norms);
    score(first) = -1.0;
    Index second = 0;
    score.maxCoeff(&second);
    OmpConfig cfg;
    cfg.sparsity = 2;
    const OmpResult res = omp(y, h, cfg);
    EXPECT_EQ(res.support, (std::vector<Index>{first, second}));
    EXPECT_NEAR(res.residual_norms[1], r1.norm(), 1e-10);
    EXPECT_NEAR(res.residual_norms.back(), ls_residual(y, h, {first, second}), 1e-10);
  }
}

TEST(Omp, ResidualsNonIncreasing) {
  std::mt19937_64 rng(23);
  const CMatrix h = random_matrix(rng, 20, 40);
  const CVector y = random_matrix(rng, 20, 1).col(0);
  OmpConfig cfg;
  cfg.sparsity = 15;
  const OmpResult r = omp(y, h, cfg);
  for (std::size_t k = 1; k < r.residual_norms.size(); ++k) {
    EXPECT_LE(r.residual_norms[k], r.residual_norms[k - 1] + 1e-12);
  }
  for (Index k : r.support) EXPECT_NE(r.coefficients(k), Complex(0.0, 0.0));
}

TEST(Omp, ResidualThresholdStops) {
  std::mt19937_64 rng(24);
  const CMatrix h = random_matrix(rng, 20, 40);
  const CVector y = random_matrix(rng, 20, 1).col(0);
  OmpConfig cfg;
  cfg.residual_threshold = 0.25 * y.squaredNorm();
  const OmpResult r = omp(y, h, cfg);
  const double last = r.residual_norms.back();
  EXPECT_LE(last * last, *cfg.residual_threshold);
  const double prev = r.residual_norms[r.residual_norms.size() - 2];
  EXPECT_GT(prev * prev, *cfg.residual_threshold);
}

TEST(Omp, TieGoesToSmallestIndex) {
  CMatrix h = CMatrix::Zero(2, 3);
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  h(0, 2) = 2.0;
  CVector y(2);
  y << 1.0, 0.0;
  OmpConfig cfg;
  cfg.sparsity = 1;
  EXPECT_EQ(omp(y, h, cfg).support, (std::vector<Index>{0}));
}

TEST(Omp, Errors) {
  OmpConfig none;
  EXPECT_THROW(none.validate(), ConfigError);
  OmpConfig cfg;
  cfg.sparsity = 2;
  CMatrix h = CMatrix::Identity(3, 3);
  h(2, 2) = 0.0;
  EXPECT_THROW(omp(CVector::Ones(3), h, cfg), DegenerateInput);
  EXPECT_THROW(omp(CVector::Ones(4), CMatrix::Identity(3, 3), cfg), DimensionError);
  CMatrix dup(2, 2);
  dup << 1.0, 1.0, 1.0, 1.0;
  CVector y(2);
  y << 1.0, 0.5;
  EXPECT_THROW(omp(y, dup, cfg), DegenerateInput);
}
