#include <gtest/gtest.h>

#include "kronsbl/dsbl.hpp"
#include "kronsbl/metrics.hpp"
#include "kronsbl/scenarios.hpp"

using namespace kronsbl;

namespace {

DsblConfig on_grid_config(Index n) {
  SblConfig sc;
  sc.grid_points = n;
  sc.grid_update = false;
  sc.record_traces = false;
  DsblConfig cfg;
  cfg.per_dimension = {sc};
  return cfg;
}

}  // namespace

TEST(Dsbl, NoiselessKronSparseRecovery) {
  Rng rng(31);
  const KronSparseScene sc = gen_kron_sparse(10, rng);
  const std::vector<ColumnFunction> cols(3, ColumnFunction::steering(10));
  const DsblResult r = run_dsbl(sc.truth.clean, sc.truth.shape, cols, on_grid_config(12));
  ASSERT_TRUE(r.assembled_x.has_value());
  EXPECT_LT(nmse(sc.x_full, *r.assembled_x), 1e-4);
  const CVector rebuilt = kron_vectors({sc.dictionaries[0] * r.per_dimension[0].dense_coefficients(),
                                        sc.dictionaries[1] * r.per_dimension[1].dense_coefficients(),
                                        sc.dictionaries[2] * r.per_dimension[2].dense_coefficients()});
  EXPECT_LT((rebuilt - sc.truth.clean).norm() / sc.truth.clean.norm(), 1e-2);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto found = support_top_k(r.per_dimension[i].dense_coefficients(), 4);
    EXPECT_EQ(found, sc.supports[i]);
  }
}

TEST(Dsbl, ScaleLivesInLastDimension) {
  Rng rng(32);
  const KronSparseScene sc = gen_kron_sparse(9, rng);
  const std::vector<ColumnFunction> cols(3, ColumnFunction::steering(9));
  const DsblResult r = run_dsbl(sc.truth.clean, sc.truth.shape, cols, on_grid_config(12));
  EXPECT_NEAR(r.factors_used.factors[0].norm(), 1.0, 1e-12);
  EXPECT_NEAR(r.factors_used.factors[1].norm(), 1.0, 1e-12);
  EXPECT_NEAR(r.factors_used.factors[2].norm(), sc.truth.clean.norm(), 1e-9);
}

TEST(Dsbl, ParallelMatchesSerial) {
  Rng rng(33);
  const KronSparseScene sc = gen_kron_sparse(8, rng);
  Rng noise(1);
  const CVector y = add_noise_at_snr(sc.truth.clean, 15.0, noise).y;
  const std::vector<ColumnFunction> cols(3, ColumnFunction::steering(8));
  DsblConfig cfg = on_grid_config(12);
  const DsblResult a = run_dsbl(y, sc.truth.shape, cols, cfg);
  cfg.parallel = true;
  const DsblResult b = run_dsbl(y, sc.truth.shape, cols, cfg);
  ASSERT_TRUE(a.assembled_x && b.assembled_x);
  EXPECT_EQ(*a.assembled_x, *b.assembled_x);
}

TEST(Dsbl, OffGridLeavesAssembledEmpty) {
  const ColumnFunction f = ColumnFunction::steering(8);
  const CVector y = kron_vectors({f(0.21), f(-0.4)});
  const std::vector<ColumnFunction> cols{f, f};
  SblConfig sc;
  sc.grid_points = 20;
  sc.top_peaks = 1;
  sc.noise_denominator = NoiseDenominator::measurement_count;
  sc.max_em_iters = 600;
  DsblConfig cfg;
  cfg.per_dimension = {sc};
  const Shape shape{8, 8};
  const DsblResult r = run_dsbl(y, shape, cols, cfg);
  EXPECT_FALSE(r.assembled_x.has_value());
  ASSERT_EQ(r.estimates.size(), 2u);
  EXPECT_NEAR(extract_estimates(r.per_dimension[0], 1)[0].param, 0.21, 1e-3);
  EXPECT_NEAR(extract_estimates(r.per_dimension[1], 1)[0].param, -0.4, 1e-3);
}

TEST(Dsbl, ConfigErrors) {
  const std::vector<ColumnFunction> cols(2, ColumnFunction::steering(4));
  const Shape shape{4, 4};
  DsblConfig cfg;
  cfg.per_dimension = {SblConfig{}, SblConfig{}, SblConfig{}};
  EXPECT_THROW(run_dsbl(CVector::Ones(16), shape, cols, cfg), ConfigError);
  cfg.per_dimension = {SblConfig{}};
  const std::vector<ColumnFunction> one(1, ColumnFunction::steering(4));
  EXPECT_THROW(run_dsbl(CVector::Ones(16), shape, one, cfg), DimensionError);
  const std::vector<ColumnFunction> wrong(2, ColumnFunction::steering(5));
  EXPECT_THROW(run_dsbl(CVector::Ones(16), shape, wrong, cfg), DimensionError);
}

TEST(IrsChannel, TrueEstimatesReproduceCascadedChannel) {
  Rng rng(34);
  const IrsScene scene = gen_irs_scene(rng);
  const IrsScenario& sc = scene.scenario;
  std::vector<std::vector<Estimate>> est(3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t k = 0; k < scene.truth.params[i].size(); ++k) {
      est[i].push_back({scene.truth.params[i][k], scene.truth.coefs[i](static_cast<Index>(k))});
    }
  }
  const IrsDims dims{sc.l, sc.t, sc.r, sc.spacing};
  // Independent build: conj of a_T(alpha_MS) through the second factor and
  // unit-magnitude phase differences through the first.
  for (Index k : {Index{0}, Index{7}}) {
    const CVector omega = sc.omega.col(k);
    const CVector v = reconstruct_irs_channel(est, omega, dims);
    const CMatrix c = cascaded_channel(sc, omega);
    // v = vec of (MS factor) (x) (BS factor), i.e. c^T flattened row-major by T.
    CMatrix fromv(sc.r, sc.t);
    for (Index t = 0; t < sc.t; ++t)
      for (Index r = 0; r < sc.r; ++r) fromv(r, t) = v(t * sc.r + r);
    EXPECT_LT((fromv - c).norm() / c.norm(), 1e-10);
  }
  EXPECT_THROW(reconstruct_irs_channel(est, CVector::Ones(3), dims), DimensionError);
}
