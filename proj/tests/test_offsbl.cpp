#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "kronsbl/offsbl.hpp"
#include "kronsbl/scenarios.hpp"

using namespace kronsbl;

namespace {

CVector random_vector(std::mt19937_64& rng, Index n, double scale = 1.0) {
  std::normal_distribution<double> nd;
  CVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = Complex(nd(rng), nd(rng)) * scale;
  return v;
}

CMatrix random_matrix(std::mt19937_64& rng, Index r, Index c) {
  CMatrix a(r, c);
  for (Index j = 0; j < c; ++j) a.col(j) = random_vector(rng, r);
  return a;
}

RVector random_gamma(std::mt19937_64& rng, Index n) {
  std::uniform_real_distribution<double> ud(0.05, 3.0);
  RVector g(n);
  for (Index i = 0; i < n; ++i) g(i) = ud(rng);
  return g;
}

// Sigma_x = Gamma - Gamma H^H (sigma^2 I + H Gamma H^H)^-1 H Gamma
Posterior woodbury_posterior(const CVector& y, const CMatrix& h, const RVector& gamma, double sigma2) {
  const CMatrix g = gamma.cast<Complex>().asDiagonal();
  const CMatrix sy = sigma2 * CMatrix::Identity(h.rows(), h.rows()) + h * g * h.adjoint();
  const CMatrix syi = sy.fullPivLu().inverse();
  Posterior p;
  p.covariance = g - g * h.adjoint() * syi * h * g;
  p.mean = g * h.adjoint() * syi * y;
  return p;
}

double dense_nll(const CVector& y, const CMatrix& h, const RVector& gamma, double sigma2) {
  const CMatrix sy =
      sigma2 * CMatrix::Identity(h.rows(), h.rows()) + h * gamma.cast<Complex>().asDiagonal() * h.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sy);
  const double logdet = es.eigenvalues().array().log().sum();
  return logdet + (y.adjoint() * sy.inverse() * y)(0).real();
}

double max_abs(const CMatrix& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Posterior, MatchesWoodburyForm) {
  std::mt19937_64 rng(11);
  for (auto [m, n] : {std::pair<Index, Index>{8, 20}, {20, 8}, {12, 12}}) {
    const CMatrix h = random_matrix(rng, m, n);
    const CVector y = random_vector(rng, m);
    const RVector gamma = random_gamma(rng, n);
    const Posterior p = compute_posterior(y, h, gamma, 0.3);
    const Posterior q = woodbury_posterior(y, h, gamma, 0.3);
    EXPECT_LE(max_abs(p.covariance - q.covariance), 1e-10);
    EXPECT_LE((p.mean - q.mean).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_TRUE(p.covariance.isApprox(p.covariance.adjoint(), 1e-12));
  }
}

TEST(Posterior, UpdateGammaIsSecondMomentDiagonal) {
  std::mt19937_64 rng(12);
  const CMatrix h = random_matrix(rng, 6, 9);
  const Posterior p = compute_posterior(random_vector(rng, 6), h, random_gamma(rng, 9), 0.1);
  const RVector g = update_gamma(p.mean, p.covariance);
  const CMatrix s = p.covariance + p.mean * p.mean.adjoint();
  for (Index i = 0; i < 9; ++i) {
    EXPECT_NEAR(g(i), s(i, i).real(), 1e-12);
    EXPECT_GT(g(i), 0.0);
  }
}

TEST(Posterior, GValueIsExpectedResidual) {
  // E||y - H x||^2 under the posterior, by Monte Carlo from the Cholesky factor.
  std::mt19937_64 rng(13);
  const CMatrix h = random_matrix(rng, 5, 7);
  const CVector y = random_vector(rng, 5);
  const Posterior p = compute_posterior(y, h, random_gamma(rng, 7), 0.5);
  const double g = g_value(y, h, p.mean, p.covariance);
  const CMatrix l = p.covariance.llt().matrixL();
  double mc = 0.0;
  const int draws = 40000;
  for (int d = 0; d < draws; ++d) {
    const CVector x = p.mean + l * random_vector(rng, 7, std::sqrt(0.5));
    mc += (y - h * x).squaredNorm() / draws;
  }
  EXPECT_NEAR(mc / g, 1.0, 0.02);
}

TEST(Likelihood, MatchesDenseInverse) {
  std::mt19937_64 rng(14);
  for (int rep = 0; rep < 20; ++rep) {
    const CMatrix h = random_matrix(rng, 10, 16);
    const CVector y = random_vector(rng, 10);
    const RVector gamma = random_gamma(rng, 16);
    const double a = negative_log_likelihood(y, h, gamma, 0.2);
    const double b = dense_nll(y, h, gamma, 0.2);
    EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, std::abs(b)));
    EXPECT_GE(a, 10.0 * std::log(0.2));
  }
}

TEST(CoordinateObjective, DiffersFromGByConstant) {
  // g(psi_n = u) - f_n(u) must not depend on u.
  std::mt19937_64 rng(15);
  const ColumnFunction f = ColumnFunction::steering(9);
  const std::vector<double> grid{-0.7, -0.2, 0.15, 0.6};
  CMatrix cols = build_dictionary(f, grid);
  const CVector y = random_vector(rng, 9);
  const Posterior p = compute_posterior(y, cols, random_gamma(rng, 4), 0.4);
  const CMatrix second = p.covariance + p.mean * p.mean.adjoint();
  const CMatrix cross = p.mean * y.adjoint();
  for (Index n = 0; n < 4; ++n) {
    const CoordinateObjective obj = coordinate_objective(n, cols, second, cross, f);
    std::vector<double> diffs;
    for (double u : {-0.95, -0.4, 0.0, 0.33, 0.8}) {
      CMatrix moved = cols;
      moved.col(n) = f(u);
      diffs.push_back(g_value(y, moved, p.mean, p.covariance) - obj(u));
    }
    for (double d : diffs) EXPECT_NEAR(d, diffs.front(), 1e-10 * std::max(1.0, std::abs(d)));
  }
}

TEST(GridSweep, MovesPointTowardSource) {
  // Source at 0.305 between grid points {0.1, 0.3, 0.5}.
  const ColumnFunction f = ColumnFunction::steering(16);
  const CVector y = f(0.305);
  SblState st;
  st.grid = {0.1, 0.3, 0.5};
  st.gamma = RVector::Ones(3);
  st.sigma2 = 1e-3;
  const Posterior p = compute_posterior(y, build_dictionary(f, st.grid), st.gamma, st.sigma2);
  st.mu = p.mean;
  st.sigma = p.covariance;
  SblConfig cfg;
  cfg.lower = 0.0;
  cfg.upper = 0.6;
  const std::vector<double> grid = grid_sweep(st, y, f, cfg);
  ASSERT_EQ(grid.size(), 3u);
  EXPECT_LT(std::abs(grid[1] - 0.305), 0.005);
  EXPECT_GE(grid[0], 0.0);
  EXPECT_LE(grid[0], 0.2);
  EXPECT_GE(grid[1], 0.2);
  EXPECT_LE(grid[1], 0.4);
  EXPECT_GE(grid[2], 0.4);
  EXPECT_LE(grid[2], 0.6);
  EXPECT_LE(g_value(y, build_dictionary(f, grid), st.mu, st.sigma),
            g_value(y, build_dictionary(f, st.grid), st.mu, st.sigma));

  cfg.top_peaks = 1;
  st.gamma = RVector::Constant(3, 0.1);
  st.gamma(1) = 1.0;
  const std::vector<double> only = grid_sweep(st, y, f, cfg);
  EXPECT_EQ(only[0], 0.1);
  EXPECT_EQ(only[2], 0.5);
}

TEST(TopPeaks, LargestWithLowIndexTieBreak) {
  RVector g(5);
  g << 0.5, 2.0, 0.5, 0.1, 2.0;
  EXPECT_EQ(top_peak_indices(g, 2), (std::vector<Index>{1, 4}));
  EXPECT_EQ(top_peak_indices(g, 3), (std::vector<Index>{0, 1, 4}));
  EXPECT_EQ(top_peak_indices(g, 9).size(), 5u);
}

TEST(Prune, RelativeThreshold) {
  SblState st;
  st.gamma.resize(4);
  st.gamma << 1.0, 1e-5, 0.5, 2e-4;
  st.grid = {-0.5, 0.0, 0.25, 0.75};
  st.active = {3, 7, 9, 11};
  SblConfig cfg;
  cfg.prune_tol = 1e-4;
  const SblState out = prune(st, cfg);
  EXPECT_EQ(out.grid, (std::vector<double>{-0.5, 0.25, 0.75}));
  EXPECT_EQ(out.active, (std::vector<Index>{3, 9, 11}));
  EXPECT_DOUBLE_EQ(out.gamma(2), 2e-4);
}

TEST(Prune, KeepsAtLeastTopPeaks) {
  SblState st;
  st.gamma.resize(4);
  st.gamma << 1.0, 1e-9, 1e-9, 1e-8;
  st.grid = {0.0, 0.1, 0.2, 0.3};
  SblConfig cfg;
  cfg.prune_tol = 1e-4;
  EXPECT_EQ(prune(st, cfg).grid.size(), 1u);
  cfg.top_peaks = 3;
  EXPECT_EQ(prune(st, cfg).grid, (std::vector<double>{0.0, 0.1, 0.3}));
  st.gamma.setZero();
  EXPECT_THROW(prune(st, cfg), DegenerateInput);
}

TEST(NoiseUpdate, Floor) {
  EXPECT_DOUBLE_EQ(update_noise(3.0, 6), 0.5);
  EXPECT_DOUBLE_EQ(update_noise(0.0, 6), kNoiseFloor);
}

TEST(RunSbl, OnGridColumnIsRecovered) {
  const ColumnFunction f = ColumnFunction::steering(12);
  const ParamGrid grid = init_uniform_grid(60);
  const CVector y = Complex(0.8, -0.6) * 3.0 * f(grid[37]);
  SblConfig cfg;
  cfg.grid_points = 60;
  cfg.grid_update = false;
  const SblResult r = run_offsbl(y, f, cfg);
  const CVector x = r.dense_coefficients();
  Index best = 0;
  x.cwiseAbs().maxCoeff(&best);
  EXPECT_EQ(best, 37);
  EXPECT_NEAR(std::abs(x(37) - Complex(2.4, -1.8)), 0.0, 1e-2);
  EXPECT_EQ(r.grid.size(), r.active.size());
  for (std::size_t k = 0; k < r.active.size(); ++k) EXPECT_DOUBLE_EQ(r.grid[k], grid[r.active[k]]);
}

TEST(RunSbl, ExplicitDictionaryMatchesContinuousOnGrid) {
  std::mt19937_64 rng(16);
  const ColumnFunction f = ColumnFunction::steering(10);
  SblConfig cfg;
  cfg.grid_points = 40;
  cfg.grid_update = false;
  const CVector y = f(0.31) + f(-0.52) + random_vector(rng, 10, 0.02);
  const SblResult a = run_offsbl(y, f, cfg);
  const SblResult b = run_sbl(y, build_dictionary(f, init_uniform_grid(40)), cfg);
  EXPECT_EQ(a.active, b.active);
  EXPECT_EQ(a.em_iters, b.em_iters);
  EXPECT_TRUE(a.mu.isApprox(b.mu, 1e-10));
}

TEST(RunOffSbl, SingleSourceMidwayBetweenGridPoints) {
  const ColumnFunction f = ColumnFunction::steering(60);
  const double truth = 0.1 + 1.0 / 180.0;
  Rng rng(3);
  const CVector y = add_noise_at_snr(f(truth), 30.0, rng).y;
  SblConfig cfg;
  cfg.top_peaks = 1;
  cfg.noise_denominator = NoiseDenominator::measurement_count;
  cfg.max_em_iters = 4000;
  cfg.eps2 = 1e-9;
  const SblResult r = run_offsbl(y, f, cfg);
  const auto est = extract_estimates(r, 1);
  EXPECT_NEAR(est[0].param, truth, 1e-3);
  EXPECT_NEAR(std::abs(est[0].coef), 1.0, 0.05);
  EXPECT_EQ(r.g_violations, 0);
  EXPECT_EQ(r.bound_violations, 0);
}

TEST(RunOffSbl, OffGridBeatsOnGridForSingleSource) {
  const ColumnFunction f = ColumnFunction::steering(16);
  Rng rng(5);
  const CVector y = add_noise_at_snr(2.0 * f(0.4137), 30.0, rng).y;
  SblConfig cfg;
  cfg.grid_points = 40;
  cfg.top_peaks = 1;
  cfg.noise_denominator = NoiseDenominator::measurement_count;
  cfg.max_em_iters = 1000;
  const double off = extract_estimates(run_offsbl(y, f, cfg), 1)[0].param;
  cfg.grid_update = false;
  const double on = extract_estimates(run_offsbl(y, f, cfg), 1)[0].param;
  EXPECT_NEAR(off, 0.4137, 1e-3);
  EXPECT_NEAR(on, 0.4, 1e-12);
}

TEST(RunOffSbl, FixedNoiseDescentHolds) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ud(-0.8, 0.8);
  const ColumnFunction f = ColumnFunction::steering(14);
  for (int rep = 0; rep < 5; ++rep) {
    const double sigma2 = 1e-2;
    const CVector y = f(ud(rng)) + f(ud(rng)) + random_vector(rng, 14, std::sqrt(sigma2 / 2));
    SblConfig cfg;
    cfg.grid_points = 30;
    cfg.prune_tol = 0.0;
    cfg.fixed_noise_variance = sigma2;
    cfg.max_em_iters = 40;
    const SblResult r = run_offsbl(y, f, cfg);
    EXPECT_EQ(r.nll_violations, 0);
    EXPECT_EQ(r.g_violations, 0);
    EXPECT_EQ(r.bound_violations, 0);
    EXPECT_EQ(r.nll_trace.size(), static_cast<std::size_t>(r.em_iters + 1));
    for (const auto& gs : r.g_trace) {
      for (std::size_t k = 1; k < gs.size(); ++k) EXPECT_LE(gs[k], gs[k - 1] * (1 + 1e-9) + 1e-12);
    }
    EXPECT_DOUBLE_EQ(r.sigma2, sigma2);
    EXPECT_TRUE(std::is_sorted(r.grid.begin(), r.grid.end()));
  }
}

TEST(RunOffSbl, RejectsBadInput) {
  const ColumnFunction f = ColumnFunction::steering(8);
  SblConfig cfg;
  EXPECT_THROW(run_offsbl(CVector::Zero(8), f, cfg), DegenerateInput);
  EXPECT_THROW(run_offsbl(CVector::Ones(7), f, cfg), DimensionError);
  cfg.prune_tol = 1.0;
  EXPECT_THROW(run_offsbl(CVector::Ones(8), f, cfg), ConfigError);
  EXPECT_THROW(noise_denominator_from_string("median"), ConfigError);
}

TEST(Extract, SortedByParameter) {
  SblResult r;
  r.gamma.resize(4);
  r.gamma << 0.2, 3.0, 0.1, 1.0;
  r.grid = {-0.6, 0.1, 0.3, 0.7};
  r.mu = CVector::LinSpaced(4, 1.0, 4.0);
  r.active = {0, 1, 2, 3};
  r.initial_grid_size = 4;
  const auto e = extract_estimates(r, 2);
  ASSERT_EQ(e.size(), 2u);
  EXPECT_DOUBLE_EQ(e[0].param, 0.1);
  EXPECT_DOUBLE_EQ(e[1].param, 0.7);
  EXPECT_EQ(e[1].coef, Complex(4.0, 0.0));
  EXPECT_EQ(all_estimates(r).size(), 4u);
  EXPECT_THROW(extract_estimates(r, 5), DimensionError);
  EXPECT_THROW(extract_estimates(r, 0), DimensionError);
}
