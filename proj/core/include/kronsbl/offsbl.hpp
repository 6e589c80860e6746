#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kronsbl/dictionary.hpp"
#include "kronsbl/line_search.hpp"

namespace kronsbl {

/// Denominator of the EM noise-variance update sigma^2 = g / D.
///
/// `grid_count` divides by the number of initial grid points N, the update as
/// published for this solver; `measurement_count` divides by M, the usual EM
/// update for a length-M measurement. grid_count is nonstandard but default.
enum class NoiseDenominator { grid_count, measurement_count };

std::string_view to_string(NoiseDenominator d);
NoiseDenominator noise_denominator_from_string(std::string_view s);

struct SblConfig {
  Index grid_points = 180;  ///< initial uniform grid size N
  double lower = -1.0;      ///< parameter range, u-domain
  double upper = 1.0;
  double eps1 = 1e-7;       ///< inner loop: stop when ||psi^(t+1) - psi^(t)|| < eps1
  double eps2 = 1e-6;       ///< EM: stop when ||gamma^(r+1) - gamma^(r)|| / ||gamma^(r)|| < eps2
  int max_em_iters = 200;
  int max_inner_iters = 20;
  /// Columns with gamma_n < prune_tol * max(gamma) are removed after every
  /// gamma update; 0 disables pruning.
  double prune_tol = 1e-4;
  /// Restrict grid updates to the grid points of the largest gamma peaks.
  std::optional<Index> top_peaks;
  /// When set, sigma^2 stays at this value and is never re-estimated.
  std::optional<double> fixed_noise_variance;
  /// Defaults to 0.1 ||y||^2 / M.
  std::optional<double> initial_noise_variance;
  /// false gives classical on-grid SBL.
  bool grid_update = true;
  NoiseDenominator noise_denominator = NoiseDenominator::grid_count;
  LineSearchConfig line_search;
  /// Keep the NLL trace and per-sweep g values (costs one extra
  /// likelihood evaluation per EM iteration).
  bool record_traces = true;
  /// Throw instead of counting when a descent check fails.
  bool assert_descent = false;

  void validate() const;
};

struct Posterior {
  CVector mean;        ///< mu_x
  CMatrix covariance;  ///< Sigma_x
};

/// Hyperparameters and posterior of one solver instance; all vectors refer to
/// the active (unpruned) columns.
struct SblState {
  RVector gamma;
  std::vector<double> grid;
  double sigma2 = 1.0;
  CVector mu;
  CMatrix sigma;
  std::vector<Index> active;  ///< positions in the initial grid
  std::vector<double> nll_trace;
};

struct Estimate {
  double param = 0.0;
  Complex coef{0.0, 0.0};
};

struct SblResult {
  CVector mu;
  RVector gamma;
  std::vector<double> grid;
  double sigma2 = 0.0;
  std::vector<Index> active;
  Index initial_grid_size = 0;
  /// Negative log-likelihood at the start of every EM iteration, followed by
  /// the value at the returned hyperparameters.
  std::vector<double> nll_trace;
  /// Per EM iteration with grid updates: g before the first sweep, then after
  /// each sweep.
  std::vector<std::vector<double>> g_trace;
  int em_iters = 0;
  int inner_sweeps = 0;
  bool converged = false;
  int g_violations = 0;
  int nll_violations = 0;    ///< only checked with a fixed noise variance
  int bound_violations = 0;  ///< NLL below M log sigma^2

  /// mu scattered onto the initial grid (zeros at pruned positions).
  CVector dense_coefficients() const;
};

/// Sigma_x = [sigma^-2 H^H H + diag(gamma)^-1]^-1, mu_x = sigma^-2 Sigma_x H^H y.
/// Throws DegenerateInput when the system is not positive definite.
Posterior compute_posterior(const CVector& y, const CMatrix& h, const RVector& gamma, double sigma2);

/// gamma_n = Sigma_x[n,n] + |mu_x[n]|^2.
RVector update_gamma(const CVector& mu, const CMatrix& sigma);

/// g = ||y - H mu||^2 + trace(Sigma_x H^H H).
double g_value(const CVector& y, const CMatrix& h, const CVector& mu, const CMatrix& sigma);

/// f_n(psi) = 2 Re{v^H h(psi)} + S[n,n] ||h(psi)||^2, the part of g that
/// depends on coordinate n with every other grid point held fixed.
class CoordinateObjective {
 public:
  CoordinateObjective(CVector v, double weight, ColumnFunction f);

  double operator()(double psi) const;
  const CVector& v() const { return v_; }
  double weight() const { return weight_; }

 private:
  CVector v_;
  double weight_;
  ColumnFunction f_;
};

/// Builds f_n from the current columns h(psi_m) (already-updated coordinates
/// included), the second moment S = Sigma_x + mu mu^H and the cross moment
/// C = mu y^H:  v = sum_{m != n} S[m,n] h(psi_m) - C[n,:]^H.
CoordinateObjective coordinate_objective(Index n, const CMatrix& columns, const CMatrix& second_moment,
                                         const CMatrix& cross_moment, const ColumnFunction& f);

/// Grid indices of the `count` largest entries of gamma (smaller index wins a
/// tie), ascending.
std::vector<Index> top_peak_indices(const RVector& gamma, Index count);

/// One alternating pass over the selected coordinates.
///
/// Coordinate n is moved to the line-search minimizer of f_n on
/// [(psi_{n-1} + psi_n) / 2, (psi_n + psi_{n+1}) / 2], with interval
/// endpoints taken from the grid as it was before the pass and the range
/// bounds used at the two ends. `columns` tracks the grid.
void grid_sweep_in_place(std::vector<double>& grid, CMatrix& columns, const CMatrix& second_moment,
                         const CMatrix& cross_moment, const ColumnFunction& f,
                         std::span<const Index> selected, const SblConfig& cfg);

/// One pass for a state whose posterior (mu, sigma) is current; selects all
/// coordinates or the top peaks of state.gamma. Returns the new grid.
std::vector<double> grid_sweep(const SblState& state, const CVector& y, const ColumnFunction& f,
                               const SblConfig& cfg);

/// max(g / denominator, 1e-12).
double update_noise(double g, Index denominator);

inline constexpr double kNoiseFloor = 1e-12;

/// log|Sigma_y| + y^H Sigma_y^-1 y with Sigma_y = sigma^2 I + H diag(gamma) H^H.
double negative_log_likelihood(const CVector& y, const CMatrix& h, const RVector& gamma, double sigma2);

/// Drops columns with gamma_n < prune_tol * max(gamma), keeping at least
/// max(top_peaks, 1) columns. Throws DegenerateInput if nothing survives.
SblState prune(const SblState& state, const SblConfig& cfg);

/// Off-grid SBL on a continuous dictionary (on-grid when cfg.grid_update is
/// false).
SblResult run_offsbl(const CVector& y, const ColumnFunction& f, const SblConfig& cfg);

/// On-grid SBL on an explicit dictionary; grid labels are a uniform grid of
/// H.cols() points over [cfg.lower, cfg.upper]. cfg.grid_update is ignored.
SblResult run_sbl(const CVector& y, const CMatrix& h, const SblConfig& cfg);

/// The S active columns with the largest gamma, sorted by parameter.
std::vector<Estimate> extract_estimates(const SblResult& result, Index count);

/// All active columns sorted by parameter.
std::vector<Estimate> all_estimates(const SblResult& result);

}  // namespace kronsbl
