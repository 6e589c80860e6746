#include "kronsbl/offsbl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace kronsbl {

std::string_view to_string(NoiseDenominator d) {
  return d == NoiseDenominator::grid_count ? "grid_count" : "measurement_count";
}

NoiseDenominator noise_denominator_from_string(std::string_view s) {
  if (s == "grid_count") return NoiseDenominator::grid_count;
  if (s == "measurement_count") return NoiseDenominator::measurement_count;
  throw ConfigError("unknown noise denominator '" + std::string(s) + "'");
}

void SblConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("sbl config: " + what); };
  if (grid_points < 2) fail("grid_points must be at least 2");
  if (!(lower < upper)) fail("lower must be below upper");
  if (!(eps1 > 0.0) || !(eps2 > 0.0)) fail("eps1 and eps2 must be positive");
  if (max_em_iters < 1 || max_inner_iters < 1) fail("iteration limits must be positive");
  if (!(prune_tol >= 0.0 && prune_tol < 1.0)) fail("prune_tol must lie in [0, 1)");
  if (top_peaks && *top_peaks < 1) fail("top_peaks must be positive");
  if (fixed_noise_variance && !(*fixed_noise_variance > 0.0)) fail("fixed_noise_variance must be positive");
  if (initial_noise_variance && !(*initial_noise_variance > 0.0)) {
    fail("initial_noise_variance must be positive");
  }
  if (line_search.coarse_samples < 2) fail("line search needs at least 2 coarse samples");
  if (!(line_search.refine_tol >= 0.0)) fail("line search refine_tol must be non-negative");
}

CVector SblResult::dense_coefficients() const {
  CVector out = CVector::Zero(initial_grid_size);
  for (std::size_t k = 0; k < active.size(); ++k) out(active[k]) = mu(static_cast<Index>(k));
  return out;
}

Posterior compute_posterior(const CVector& y, const CMatrix& h, const RVector& gamma, double sigma2) {
  if (h.rows() != y.size() || h.cols() != gamma.size()) {
    throw DimensionError("compute_posterior: H, y and gamma sizes disagree");
  }
  if (!(sigma2 > 0.0) || (gamma.array() <= 0.0).any()) {
    throw DegenerateInput("compute_posterior: gamma and sigma^2 must be positive");
  }
  CMatrix a = h.adjoint() * h / sigma2;
  a.diagonal().array() += gamma.cwiseInverse().array().cast<Complex>();
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success) throw DegenerateInput("compute_posterior: precision not positive definite");
  Posterior p;
  p.covariance = llt.solve(CMatrix::Identity(a.rows(), a.cols()));
  p.mean = p.covariance * (h.adjoint() * y) / sigma2;
  return p;
}

RVector update_gamma(const CVector& mu, const CMatrix& sigma) {
  if (sigma.rows() != mu.size() || sigma.cols() != mu.size()) {
    throw DimensionError("update_gamma: size mismatch");
  }
  return sigma.diagonal().real() + mu.cwiseAbs2();
}

double g_value(const CVector& y, const CMatrix& h, const CVector& mu, const CMatrix& sigma) {
  if (h.rows() != y.size() || h.cols() != mu.size() || sigma.rows() != mu.size()) {
    throw DimensionError("g_value: size mismatch");
  }
  const double resid = (y - h * mu).squaredNorm();
  const double trace = (h * sigma).cwiseProduct(h.conjugate()).sum().real();
  return resid + trace;
}

CoordinateObjective::CoordinateObjective(CVector v, double weight, ColumnFunction f)
    : v_(std::move(v)), weight_(weight), f_(std::move(f)) {}

double CoordinateObjective::operator()(double psi) const {
  const CVector h = f_(psi);
  return 2.0 * v_.dot(h).real() + weight_ * h.squaredNorm();
}

CoordinateObjective coordinate_objective(Index n, const CMatrix& columns, const CMatrix& second_moment,
                                         const CMatrix& cross_moment, const ColumnFunction& f) {
  CVector v = columns * second_moment.col(n) - columns.col(n) * second_moment(n, n);
  v -= cross_moment.row(n).adjoint();
  return CoordinateObjective(std::move(v), second_moment(n, n).real(), f);
}

std::vector<Index> top_peak_indices(const RVector& gamma, Index count) {
  std::vector<Index> idx(static_cast<std::size_t>(gamma.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  const auto k = static_cast<std::size_t>(std::clamp<Index>(count, 0, gamma.size()));
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](Index a, Index b) { return gamma(a) > gamma(b) || (gamma(a) == gamma(b) && a < b); });
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

void grid_sweep_in_place(std::vector<double>& grid, CMatrix& columns, const CMatrix& second_moment,
                         const CMatrix& cross_moment, const ColumnFunction& f,
                         std::span<const Index> selected, const SblConfig& cfg) {
  const auto n_total = static_cast<Index>(grid.size());
  if (columns.cols() != n_total || second_moment.rows() != n_total || cross_moment.rows() != n_total) {
    throw DimensionError("grid_sweep: size mismatch");
  }
  const std::vector<double> before = grid;
  const double abs_tol = cfg.line_search.refine_tol * (cfg.upper - cfg.lower);
  for (Index n : selected) {
    const auto k = static_cast<std::size_t>(n);
    const double lo = n == 0 ? cfg.lower : 0.5 * (before[k - 1] + before[k]);
    const double hi = n == n_total - 1 ? cfg.upper : 0.5 * (before[k] + before[k + 1]);
    const CoordinateObjective obj = coordinate_objective(n, columns, second_moment, cross_moment, f);
    const double psi = line_search_1d([&obj](double u) { return obj(u); }, lo, hi, grid[k],
                                      cfg.line_search.coarse_samples, abs_tol);
    if (psi != grid[k]) {
      grid[k] = psi;
      f.evaluate_into(psi, columns.col(n));
    }
  }
}

std::vector<double> grid_sweep(const SblState& state, const CVector& y, const ColumnFunction& f,
                               const SblConfig& cfg) {
  const auto n = static_cast<Index>(state.grid.size());
  if (state.mu.size() != n || state.sigma.rows() != n || state.gamma.size() != n) {
    throw DimensionError("grid_sweep: state size mismatch");
  }
  CMatrix columns = build_dictionary(f, state.grid);
  const CMatrix second = state.sigma + state.mu * state.mu.adjoint();
  const CMatrix cross = state.mu * y.adjoint();
  std::vector<Index> selected;
  if (cfg.top_peaks) {
    selected = top_peak_indices(state.gamma, *cfg.top_peaks);
  } else {
    selected.resize(static_cast<std::size_t>(n));
    std::iota(selected.begin(), selected.end(), Index{0});
  }
  std::vector<double> grid = state.grid;
  grid_sweep_in_place(grid, columns, second, cross, f, selected, cfg);
  return grid;
}

double update_noise(double g, Index denominator) {
  if (denominator < 1) throw DimensionError("update_noise: denominator must be positive");
  return std::max(g / static_cast<double>(denominator), kNoiseFloor);
}

double negative_log_likelihood(const CVector& y, const CMatrix& h, const RVector& gamma, double sigma2) {
  if (h.rows() != y.size() || h.cols() != gamma.size()) {
    throw DimensionError("negative_log_likelihood: size mismatch");
  }
  CMatrix cov = h * gamma.cast<Complex>().asDiagonal() * h.adjoint();
  cov.diagonal().array() += sigma2;
  Eigen::LLT<CMatrix> llt(cov);
  if (llt.info() != Eigen::Success) throw DegenerateInput("negative_log_likelihood: Sigma_y not positive definite");
  const CMatrix& l = llt.matrixLLT();
  double logdet = 0.0;
  for (Index i = 0; i < l.rows(); ++i) logdet += 2.0 * std::log(l(i, i).real());
  const CVector w = llt.matrixL().solve(y);
  return logdet + w.squaredNorm();
}

namespace {

std::vector<Index> surviving(const RVector& gamma, const SblConfig& cfg) {
  const Index min_keep = std::min<Index>(std::max<Index>(cfg.top_peaks.value_or(1), 1), gamma.size());
  const double cut = cfg.prune_tol * gamma.maxCoeff();
  std::vector<Index> keep;
  for (Index i = 0; i < gamma.size(); ++i) {
    if (gamma(i) >= cut) keep.push_back(i);
  }
  if (static_cast<Index>(keep.size()) < min_keep) keep = top_peak_indices(gamma, min_keep);
  return keep;
}

template <class V>
V select_entries(const V& v, const std::vector<Index>& keep) {
  V out(static_cast<Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) out(static_cast<Index>(k)) = v(keep[k]);
  return out;
}

template <class T>
std::vector<T> select_items(const std::vector<T>& v, const std::vector<Index>& keep) {
  std::vector<T> out;
  out.reserve(keep.size());
  for (Index k : keep) out.push_back(v[static_cast<std::size_t>(k)]);
  return out;
}

}  // namespace

SblState prune(const SblState& state, const SblConfig& cfg) {
  const Index n = state.gamma.size();
  if (n == 0 || static_cast<Index>(state.grid.size()) != n) throw DimensionError("prune: empty or inconsistent state");
  if (!(state.gamma.maxCoeff() > 0.0)) throw DegenerateInput("prune: all gamma are zero");
  const std::vector<Index> keep = surviving(state.gamma, cfg);
  SblState out;
  out.gamma = select_entries(state.gamma, keep);
  out.grid = select_items(state.grid, keep);
  out.sigma2 = state.sigma2;
  if (state.mu.size() == n) out.mu = select_entries(state.mu, keep);
  if (state.sigma.rows() == n && state.sigma.cols() == n) out.sigma = state.sigma(keep, keep);
  out.active = state.active.size() == static_cast<std::size_t>(n) ? select_items(state.active, keep) : keep;
  out.nll_trace = state.nll_trace;
  return out;
}

namespace {

// H^H H from a Hermitian rank update (half the work of a general product).
CMatrix gram_of(const CMatrix& h) {
  CMatrix g = CMatrix::Zero(h.cols(), h.cols());
  g.selfadjointView<Eigen::Lower>().rankUpdate(h.adjoint());
  return g.selfadjointView<Eigen::Lower>();
}

struct Stats {
  CVector mu;
  RVector diag;        // diag(Sigma_x)
  CMatrix sigma;       // filled only on request
  double trace_gram;   // trace(Sigma_x H^H H) at the H the posterior was built from
  double resid2;       // ||y - H mu||^2
};

// Posterior statistics through whichever of the N x N or M x M systems is
// cheaper.
Stats posterior_stats(const CVector& y, const CMatrix& h, const CMatrix& gram, const CVector& hy,
                      const RVector& gamma, double sigma2, bool need_sigma) {
  const double m = static_cast<double>(h.rows());
  const double n = static_cast<double>(h.cols());
  const double gmax = gamma.maxCoeff();
  const bool tiny = (gamma.array() < 1e-12 * gmax).any();
  const double direct_cost = n * n * n;
  const double woodbury_cost = m * m * n + m * m * m / 3.0 + (need_sigma ? n * n * m : 0.0);
  Stats s;
  bool direct = !tiny && direct_cost <= woodbury_cost;
  if (direct) {
    CMatrix a = gram / sigma2;
    a.diagonal().array() += gamma.cwiseInverse().array().cast<Complex>();
    Eigen::LLT<CMatrix> llt(a);
    // falls back to the M x M system on failure
    direct = llt.info() == Eigen::Success;
    if (direct) {
      const CMatrix linv = llt.matrixL().solve(CMatrix::Identity(a.rows(), a.cols()));
      s.diag = linv.colwise().squaredNorm().transpose();
      s.mu = llt.solve(hy) / sigma2;
      s.trace_gram = sigma2 * (n - (s.diag.array() / gamma.array()).sum());
      if (need_sigma) s.sigma = linv.adjoint() * linv;
    }
  }
  if (!direct) {
    const CMatrix hg = h * gamma.cast<Complex>().asDiagonal();
    CMatrix c = CMatrix::Zero(h.rows(), h.rows());
    c.selfadjointView<Eigen::Lower>().rankUpdate(h * gamma.cwiseSqrt().cast<Complex>().asDiagonal());
    c.diagonal().array() += sigma2;
    Eigen::LLT<CMatrix> llt(c);
    if (llt.info() != Eigen::Success) throw DegenerateInput("sbl: Sigma_y not positive definite");
    const CMatrix w = llt.matrixL().solve(h);
    const RVector wn = w.colwise().squaredNorm().transpose();
    s.diag = gamma.array() - gamma.array().square() * wn.array();
    s.diag = s.diag.cwiseMax(0.0);
    s.mu = hg.adjoint() * llt.solve(y);
    s.trace_gram = sigma2 * (gamma.array() * wn.array()).sum();
    if (need_sigma) {
      const CMatrix wg = w * gamma.cast<Complex>().asDiagonal();
      s.sigma = -(wg.adjoint() * wg);
      s.sigma.diagonal().array() += gamma.array().cast<Complex>();
    }
  }
  s.resid2 = (y - h * s.mu).squaredNorm();
  return s;
}

bool exceeds(double after, double before) {
  return after > before + 1e-9 * std::max(1.0, std::abs(before));
}

SblResult run_em(const CVector& y, CMatrix h, std::vector<double> grid, const ColumnFunction* f,
                 const SblConfig& cfg) {
  if (y.size() == 0) throw DimensionError("sbl: empty measurement");
  if (!(y.squaredNorm() > 0.0)) throw DegenerateInput("sbl: measurement is all zeros");
  if (h.rows() != y.size()) throw DimensionError("sbl: dictionary rows do not match measurement length");

  const Index n0 = h.cols();
  const Index m = y.size();
  const bool off_grid = f != nullptr;
  const Index denominator = cfg.noise_denominator == NoiseDenominator::grid_count ? n0 : m;

  CMatrix full_gram;
  CVector full_hy;
  if (!off_grid) {
    full_gram = gram_of(h);
    full_hy = h.adjoint() * y;
  }

  SblResult res;
  res.initial_grid_size = n0;
  std::vector<Index> active(static_cast<std::size_t>(n0));
  std::iota(active.begin(), active.end(), Index{0});
  RVector gamma = RVector::Ones(n0);
  double sigma2 = cfg.fixed_noise_variance.value_or(
      cfg.initial_noise_variance.value_or(0.1 * y.squaredNorm() / static_cast<double>(m)));

  auto check = [&](bool violated, int& counter, const char* what) {
    if (!violated) return;
    ++counter;
    if (cfg.assert_descent) throw Error(std::string("sbl: descent check failed: ") + what);
  };
  auto record_nll = [&]() {
    const double nll = negative_log_likelihood(y, h, gamma, sigma2);
    if (!res.nll_trace.empty() && cfg.fixed_noise_variance && cfg.prune_tol == 0.0) {
      check(exceeds(nll, res.nll_trace.back()), res.nll_violations, "negative log-likelihood increased");
    }
    check(nll < static_cast<double>(m) * std::log(sigma2) - 1e-9 * std::abs(nll), res.bound_violations,
          "negative log-likelihood below M log sigma^2");
    res.nll_trace.push_back(nll);
  };

  for (int r = 0; r < cfg.max_em_iters; ++r) {
    CMatrix gram;
    CVector hy;
    if (off_grid) {
      gram = gram_of(h);
      hy = h.adjoint() * y;
    } else {
      gram = full_gram(active, active);
      hy = full_hy(active);
    }
    if (cfg.record_traces) record_nll();

    const bool sweep = off_grid && cfg.grid_update;
    Stats st = posterior_stats(y, h, gram, hy, gamma, sigma2, sweep);
    RVector gamma_new = st.diag + st.mu.cwiseAbs2();
    double g = st.resid2 + st.trace_gram;

    if (sweep) {
      const CMatrix second = st.sigma + st.mu * st.mu.adjoint();
      const CMatrix cross = st.mu * y.adjoint();
      std::vector<Index> selected;
      if (cfg.top_peaks) {
        selected = top_peak_indices(gamma_new, *cfg.top_peaks);
      } else {
        selected.resize(grid.size());
        std::iota(selected.begin(), selected.end(), Index{0});
      }
      std::vector<double> g_iter;
      if (cfg.record_traces) g_iter.push_back(g);
      for (int t = 0; t < cfg.max_inner_iters; ++t) {
        const std::vector<double> before = grid;
        grid_sweep_in_place(grid, h, second, cross, *f, selected, cfg);
        ++res.inner_sweeps;
        if (cfg.record_traces) {
          const double g_now = g_value(y, h, st.mu, st.sigma);
          check(exceeds(g_now, g_iter.back()), res.g_violations, "g increased during a grid sweep");
          g_iter.push_back(g_now);
        }
        double step2 = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k) step2 += (grid[k] - before[k]) * (grid[k] - before[k]);
        if (std::sqrt(step2) < cfg.eps1) break;
      }
      if (!cfg.fixed_noise_variance) g = cfg.record_traces ? g_iter.back() : g_value(y, h, st.mu, st.sigma);
      if (cfg.record_traces) res.g_trace.push_back(std::move(g_iter));
    }

    if (!cfg.fixed_noise_variance) sigma2 = update_noise(g, denominator);

    const double gnorm = gamma.norm();
    const double rel = (gamma_new - gamma).norm() / gnorm;
    gamma = std::move(gamma_new);
    ++res.em_iters;

    if (cfg.prune_tol > 0.0 || cfg.top_peaks) {
      if (!(gamma.maxCoeff() > 0.0)) throw DegenerateInput("sbl: all gamma collapsed to zero");
      const std::vector<Index> keep = surviving(gamma, cfg);
      if (keep.size() != grid.size()) {
        gamma = select_entries(gamma, keep);
        grid = select_items(grid, keep);
        active = select_items(active, keep);
        h = CMatrix(h(Eigen::all, keep));
      }
    }
    if (rel < cfg.eps2) {
      res.converged = true;
      break;
    }
  }

  CMatrix gram;
  CVector hy;
  if (off_grid) {
    gram = gram_of(h);
    hy = h.adjoint() * y;
  } else {
    gram = full_gram(active, active);
    hy = full_hy(active);
  }
  if (cfg.record_traces) record_nll();
  Stats st = posterior_stats(y, h, gram, hy, gamma, sigma2, false);

  res.mu = std::move(st.mu);
  res.gamma = std::move(gamma);
  res.grid = std::move(grid);
  res.sigma2 = sigma2;
  res.active = std::move(active);
  return res;
}

}  // namespace

SblResult run_offsbl(const CVector& y, const ColumnFunction& f, const SblConfig& cfg) {
  cfg.validate();
  if (f.output_dim() != y.size()) throw DimensionError("run_offsbl: column length does not match measurement");
  const ParamGrid grid = init_uniform_grid(cfg.grid_points, cfg.lower, cfg.upper);
  CMatrix h = build_dictionary(f, grid);
  return run_em(y, std::move(h), grid.points(), cfg.grid_update ? &f : nullptr, cfg);
}

SblResult run_sbl(const CVector& y, const CMatrix& h, const SblConfig& cfg) {
  cfg.validate();
  const ParamGrid grid = init_uniform_grid(h.cols(), cfg.lower, cfg.upper);
  return run_em(y, h, grid.points(), nullptr, cfg);
}

std::vector<Estimate> extract_estimates(const SblResult& result, Index count) {
  if (count < 1 || count > result.gamma.size()) {
    throw DimensionError("extract_estimates: requested " + std::to_string(count) + " of " +
                         std::to_string(result.gamma.size()) + " active columns");
  }
  std::vector<Estimate> out;
  for (Index k : top_peak_indices(result.gamma, count)) {
    out.push_back({result.grid[static_cast<std::size_t>(k)], result.mu(k)});
  }
  std::sort(out.begin(), out.end(), [](const Estimate& a, const Estimate& b) { return a.param < b.param; });
  return out;
}

std::vector<Estimate> all_estimates(const SblResult& result) {
  std::vector<Estimate> out;
  for (Index k = 0; k < result.gamma.size(); ++k) {
    out.push_back({result.grid[static_cast<std::size_t>(k)], result.mu(k)});
  }
  std::sort(out.begin(), out.end(), [](const Estimate& a, const Estimate& b) { return a.param < b.param; });
  return out;
}

}  // namespace kronsbl
