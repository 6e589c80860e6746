#include "kronsbl/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

namespace kronsbl {

namespace {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

CMatrix unit_phase_matrix(Rng& rng, Index rows, Index cols, double phase_hi, double scale) {
  CMatrix out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) out(i, j) = std::polar(scale, uniform(rng, 0.0, phase_hi));
  }
  return out;
}

// Sequential draws from U[lo, hi], rejecting any value closer than min_sep
// to one already accepted.
std::vector<double> separated_draws(Rng& rng, Index count, double lo, double hi, double min_sep,
                                    int max_attempts) {
  std::vector<double> out;
  int attempts = 0;
  while (static_cast<Index>(out.size()) < count) {
    if (attempts++ >= max_attempts) {
      throw ConfigError("scenario: cannot place " + std::to_string(count) + " values with separation " +
                        std::to_string(min_sep));
    }
    const double u = uniform(rng, lo, hi);
    const bool ok = std::all_of(out.begin(), out.end(), [&](double v) { return std::abs(v - u) >= min_sep; });
    if (ok) out.push_back(u);
  }
  return out;
}

CVector superpose(const ColumnFunction& f, const std::vector<double>& params, const CVector& coefs) {
  CVector s = CVector::Zero(f.output_dim());
  for (std::size_t k = 0; k < params.size(); ++k) s += coefs(static_cast<Index>(k)) * f(params[k]);
  return s;
}

void sort_by_param(std::vector<double>& params, CVector& coefs) {
  std::vector<std::size_t> idx(params.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return params[a] < params[b]; });
  std::vector<double> p;
  CVector c(coefs.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    p.push_back(params[idx[k]]);
    c(static_cast<Index>(k)) = coefs(static_cast<Index>(idx[k]));
  }
  params = std::move(p);
  coefs = std::move(c);
}

}  // namespace

Complex complex_normal(Rng& rng, double variance) {
  std::normal_distribution<double> nd(0.0, std::sqrt(variance / 2.0));
  const double re = nd(rng);
  const double im = nd(rng);
  return {re, im};
}

NoisyMeasurement add_noise_at_snr(const CVector& signal, double snr_db, Rng& rng) {
  const double energy = signal.squaredNorm();
  if (signal.size() == 0 || !(energy > 0.0)) throw DegenerateInput("add_noise_at_snr: zero signal");
  NoisyMeasurement out{signal, 0.0};
  if (std::isinf(snr_db) && snr_db > 0) return out;
  out.noise_variance = energy / (static_cast<double>(signal.size()) * std::pow(10.0, snr_db / 10.0));
  for (Index i = 0; i < signal.size(); ++i) out.y(i) += complex_normal(rng, out.noise_variance);
  return out;
}

KronSparseScene gen_kron_sparse(Index m, Rng& rng, const KronSparseOptions& opts) {
  if (m < 1 || opts.order < 1 || opts.nonzeros < 1 || opts.nonzeros > opts.grid_points) {
    throw ConfigError("gen_kron_sparse: invalid sizes");
  }
  KronSparseScene sc;
  sc.grid = init_uniform_grid(opts.grid_points).points();
  const ColumnFunction f = ColumnFunction::steering(m, opts.spacing);
  for (Index i = 0; i < opts.order; ++i) {
    sc.dictionaries.push_back(build_dictionary(f, sc.grid));
    std::vector<Index> pos(static_cast<std::size_t>(opts.grid_points));
    for (Index n = 0; n < opts.grid_points; ++n) pos[static_cast<std::size_t>(n)] = n;
    for (Index k = 0; k < opts.nonzeros; ++k) {  // partial Fisher-Yates
      std::uniform_int_distribution<Index> pick(k, opts.grid_points - 1);
      std::swap(pos[static_cast<std::size_t>(k)], pos[static_cast<std::size_t>(pick(rng))]);
    }
    pos.resize(static_cast<std::size_t>(opts.nonzeros));
    std::sort(pos.begin(), pos.end());
    CVector x = CVector::Zero(opts.grid_points);
    std::vector<double> params;
    CVector coefs(opts.nonzeros);
    for (Index k = 0; k < opts.nonzeros; ++k) {
      const Index n = pos[static_cast<std::size_t>(k)];
      x(n) = uniform(rng, opts.amplitude_lo, opts.amplitude_hi);
      params.push_back(sc.grid[static_cast<std::size_t>(n)]);
      coefs(k) = x(n);
    }
    sc.supports.push_back(std::move(pos));
    sc.x.push_back(std::move(x));
    sc.truth.params.push_back(std::move(params));
    sc.truth.coefs.push_back(std::move(coefs));
    sc.truth.shape.push_back(m);
  }
  sc.x_full = kron_vectors(sc.x);
  std::vector<CVector> parts;
  for (Index i = 0; i < opts.order; ++i) parts.push_back(sc.dictionaries[static_cast<std::size_t>(i)] * sc.x[static_cast<std::size_t>(i)]);
  sc.truth.clean = kron_vectors(parts);
  return sc;
}

OffgridScene gen_offgrid_scene(Index m, Index sources, Rng& rng, const OffgridOptions& opts) {
  if (m < 1 || sources < 1) throw ConfigError("gen_offgrid_scene: invalid sizes");
  OffgridScene sc;
  sc.omega = unit_phase_matrix(rng, opts.irs_elements, m, std::numbers::pi, 1.0);
  sc.column = ColumnFunction::compressed(sc.omega.transpose(), opts.irs_elements);
  std::vector<double> params =
      separated_draws(rng, sources, opts.lower, opts.upper, opts.min_separation, opts.max_attempts);
  CVector coefs(sources);
  for (Index k = 0; k < sources; ++k) coefs(k) = complex_normal(rng, opts.coef_variance);
  sort_by_param(params, coefs);
  sc.truth.shape = {m};
  sc.truth.clean = superpose(sc.column, params, coefs);
  sc.truth.params = {std::move(params)};
  sc.truth.coefs = {std::move(coefs)};
  return sc;
}

OffgridScene gen_worst_case(Rng& rng, Index irs_elements) {
  constexpr Index m = 60;
  OffgridScene sc;
  sc.omega = unit_phase_matrix(rng, irs_elements, m, std::numbers::pi, 1.0);
  sc.column = ColumnFunction::compressed(sc.omega.transpose(), irs_elements);
  std::vector<double> params(kWorstCaseTruths.begin(), kWorstCaseTruths.end());
  const CVector coefs = CVector::Ones(static_cast<Index>(params.size()));
  sc.truth.shape = {m};
  sc.truth.clean = superpose(sc.column, params, coefs);
  sc.truth.params = {std::move(params)};
  sc.truth.coefs = {coefs};
  return sc;
}

IrsScene gen_irs_scene(Rng& rng, const IrsOptions& opts) {
  IrsScene out;
  IrsScenario& sc = out.scenario;
  sc.r = opts.bs_antennas;
  sc.t = opts.ms_antennas;
  sc.l = opts.irs_elements;
  sc.k_i = opts.configurations;
  sc.k_p = opts.pilots;
  sc.p_ms = opts.ms_paths;
  sc.p_bs = 1;
  sc.spacing = opts.spacing;
  sc.omega = unit_phase_matrix(rng, sc.l, sc.k_i, std::numbers::pi, 1.0 / std::sqrt(static_cast<double>(sc.l)));
  sc.pilots = unit_phase_matrix(rng, sc.t, sc.k_p, 2.0 * std::numbers::pi, 1.0 / std::sqrt(static_cast<double>(sc.t)));
  sc.alpha_ms = uniform(rng, opts.alpha_ms_lo, opts.alpha_ms_hi);
  sc.phi_bs = uniform(rng, opts.phi_bs_lo, opts.phi_bs_hi);
  sc.phi_ms = separated_draws(rng, sc.p_ms, opts.phi_ms_lo, opts.phi_ms_hi, opts.min_separation, opts.max_attempts);
  std::sort(sc.phi_ms.begin(), sc.phi_ms.end());
  sc.alpha_bs = {uniform(rng, opts.alpha_bs_lo, opts.alpha_bs_hi)};
  sc.beta_ms.resize(sc.p_ms);
  for (Index p = 0; p < sc.p_ms; ++p) sc.beta_ms(p) = complex_normal(rng, 1.0);
  sc.beta_bs.resize(sc.p_bs);
  for (Index p = 0; p < sc.p_bs; ++p) sc.beta_bs(p) = complex_normal(rng, 1.0);
  sc.zeta = std::sqrt(static_cast<double>(sc.l * sc.r * sc.t) / static_cast<double>(sc.p_ms * sc.p_bs));

  out.columns = {ColumnFunction::compressed(sc.omega.transpose(), sc.l, sc.spacing),
                 ColumnFunction::compressed(sc.pilots.transpose(), sc.t, sc.spacing),
                 ColumnFunction::steering(sc.r, sc.spacing)};
  std::vector<double> psi1;
  for (double phi : sc.phi_ms) psi1.push_back(phi - sc.phi_bs);
  out.truth.params = {psi1, {-sc.alpha_ms}, sc.alpha_bs};
  out.truth.coefs = {sc.beta_ms, CVector::Constant(1, Complex(sc.zeta, 0.0)), sc.beta_bs};
  out.truth.shape = {sc.k_i, sc.k_p, sc.r};
  for (std::size_t i = 0; i < 3; ++i) {
    out.factors.push_back(superpose(out.columns[i], out.truth.params[i], out.truth.coefs[i]));
  }
  out.truth.clean = kron_vectors(out.factors);
  return out;
}

CMatrix irs_ms_channel(const IrsScenario& sc) {
  const double scale = std::sqrt(static_cast<double>(sc.l * sc.t) / static_cast<double>(sc.p_ms));
  const CVector at = steering_column(sc.t, sc.spacing, sc.alpha_ms);
  CMatrix out = CMatrix::Zero(sc.l, sc.t);
  for (Index p = 0; p < sc.p_ms; ++p) {
    out += scale * sc.beta_ms(p) * steering_column(sc.l, sc.spacing, sc.phi_ms[static_cast<std::size_t>(p)]) *
           at.adjoint();
  }
  return out;
}

CMatrix irs_bs_channel(const IrsScenario& sc) {
  const double scale = std::sqrt(static_cast<double>(sc.r * sc.l) / static_cast<double>(sc.p_bs));
  const CVector al = steering_column(sc.l, sc.spacing, sc.phi_bs);
  CMatrix out = CMatrix::Zero(sc.r, sc.l);
  for (Index p = 0; p < sc.p_bs; ++p) {
    out += scale * sc.beta_bs(p) * steering_column(sc.r, sc.spacing, sc.alpha_bs[static_cast<std::size_t>(p)]) *
           al.adjoint();
  }
  return out;
}

CMatrix cascaded_channel(const IrsScenario& sc, const CVector& omega) {
  if (omega.size() != sc.l) throw DimensionError("cascaded_channel: omega length differs from L");
  return irs_bs_channel(sc) * omega.asDiagonal() * irs_ms_channel(sc);
}

CVector irs_measurement_from_channels(const IrsScenario& sc) {
  const CMatrix ms = irs_ms_channel(sc);
  const CMatrix bs = irs_bs_channel(sc);
  CVector out(sc.r * sc.k_p * sc.k_i);
  for (Index k = 0; k < sc.k_i; ++k) {
    const CMatrix yk = bs * sc.omega.col(k).asDiagonal() * ms * sc.pilots;
    out.segment(k * sc.r * sc.k_p, sc.r * sc.k_p) = yk.reshaped();
  }
  return out;
}

std::string scenario_json(std::string_view experiment, std::uint64_t seed, const GroundTruth& truth) {
  nlohmann::json j;
  j["experiment"] = std::string(experiment);
  j["seed"] = seed;
  j["shape"] = truth.shape;
  j["noise_variance"] = truth.noise_variance;
  nlohmann::json dims = nlohmann::json::array();
  for (std::size_t i = 0; i < truth.params.size(); ++i) {
    nlohmann::json d;
    d["params"] = truth.params[i];
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (Index k = 0; k < truth.coefs[i].size(); ++k) {
      re.push_back(truth.coefs[i](k).real());
      im.push_back(truth.coefs[i](k).imag());
    }
    d["coef_re"] = re;
    d["coef_im"] = im;
    dims.push_back(d);
  }
  j["dimensions"] = dims;
  return j.dump(2);
}

}  // namespace kronsbl
