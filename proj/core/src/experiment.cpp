#include "kronsbl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>
#include <unsupported/Eigen/KroneckerProduct>

#include "kronsbl/dsbl.hpp"
#include "kronsbl/metrics.hpp"
#include "kronsbl/omp.hpp"
#include "kronsbl/scenarios.hpp"

namespace kronsbl {

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::kron_sparse: return "kron_sparse";
    case ExperimentKind::offgrid: return "offgrid";
    case ExperimentKind::worst_case: return "worst_case";
    case ExperimentKind::irs: return "irs";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(std::string_view s) {
  for (auto k : {ExperimentKind::kron_sparse, ExperimentKind::offgrid, ExperimentKind::worst_case,
                 ExperimentKind::irs}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("unknown experiment '" + std::string(s) + "'");
}

const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> names{"dsbl_hosvd", "dsbl_recursive", "dsbl_ongrid",
                                              "offsbl",     "sbl_ongrid_full", "omp_full"};
  return names;
}

namespace {

bool allowed(ExperimentKind k, const std::string& alg) {
  switch (k) {
    case ExperimentKind::kron_sparse:
      return alg == "dsbl_hosvd" || alg == "dsbl_recursive" || alg == "sbl_ongrid_full" || alg == "omp_full";
    case ExperimentKind::offgrid:
    case ExperimentKind::worst_case:
      return alg != "dsbl_ongrid";
    case ExperimentKind::irs:
      return alg == "dsbl_hosvd" || alg == "dsbl_recursive" || alg == "dsbl_ongrid";
  }
  return false;
}

}  // namespace

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("experiment config: " + what); };
  if (trials < 1) fail("trials must be at least 1");
  if (threads < 1) fail("threads must be at least 1");
  if (snr_db.empty() || m_list.empty() || s_list.empty()) fail("sweep lists must be nonempty");
  for (double s : snr_db) {
    if (std::isnan(s) || s == -std::numeric_limits<double>::infinity()) fail("invalid SNR");
  }
  for (Index m : m_list) {
    if (m < 1) fail("M must be positive");
  }
  for (Index s : s_list) {
    if (s < 1) fail("S must be positive");
  }
  if (algorithms.empty()) fail("no algorithms");
  for (std::size_t i = 0; i < algorithms.size(); ++i) {
    const std::string& a = algorithms[i];
    if (std::find(known_algorithms().begin(), known_algorithms().end(), a) == known_algorithms().end()) {
      fail("unknown algorithm '" + a + "'");
    }
    if (!allowed(experiment, a)) fail("algorithm '" + a + "' is not available for " + std::string(to_string(experiment)));
    if (std::find(algorithms.begin(), algorithms.begin() + static_cast<std::ptrdiff_t>(i), a) !=
        algorithms.begin() + static_cast<std::ptrdiff_t>(i)) {
      fail("duplicate algorithm '" + a + "'");
    }
  }
  if (irs_grid.size() != 3 || irs_ongrid_grid.size() != 3) fail("irs grids need three sizes");
  for (Index n : irs_grid) {
    if (n < 2) fail("irs grid sizes must be at least 2");
  }
  for (Index n : irs_ongrid_grid) {
    if (n < 2) fail("irs grid sizes must be at least 2");
  }
  sbl.validate();
}

namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::initializer_list<std::string_view> keys, std::string_view where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
      throw ConfigError("unknown key '" + it.key() + "' in " + std::string(where));
    }
  }
}

double snr_value(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    throw ConfigError("snr_db entries must be numbers or \"inf\"");
  }
  return v.get<double>();
}

SblConfig parse_sbl(const json& j) {
  reject_unknown(j,
                 {"grid_points", "lower", "upper", "eps1", "eps2", "max_em_iters", "max_inner_iters", "prune_tol",
                  "top_peaks", "fixed_noise_variance", "initial_noise_variance", "grid_update", "noise_denominator",
                  "coarse_samples", "refine_tol"},
                 "sbl");
  SblConfig c;
  if (j.contains("grid_points")) c.grid_points = j["grid_points"].get<Index>();
  if (j.contains("lower")) c.lower = j["lower"].get<double>();
  if (j.contains("upper")) c.upper = j["upper"].get<double>();
  if (j.contains("eps1")) c.eps1 = j["eps1"].get<double>();
  if (j.contains("eps2")) c.eps2 = j["eps2"].get<double>();
  if (j.contains("max_em_iters")) c.max_em_iters = j["max_em_iters"].get<int>();
  if (j.contains("max_inner_iters")) c.max_inner_iters = j["max_inner_iters"].get<int>();
  if (j.contains("prune_tol")) c.prune_tol = j["prune_tol"].get<double>();
  if (j.contains("top_peaks")) c.top_peaks = j["top_peaks"].get<Index>();
  if (j.contains("fixed_noise_variance")) c.fixed_noise_variance = j["fixed_noise_variance"].get<double>();
  if (j.contains("initial_noise_variance")) c.initial_noise_variance = j["initial_noise_variance"].get<double>();
  if (j.contains("grid_update")) c.grid_update = j["grid_update"].get<bool>();
  if (j.contains("noise_denominator")) {
    c.noise_denominator = noise_denominator_from_string(j["noise_denominator"].get<std::string>());
  }
  if (j.contains("coarse_samples")) c.line_search.coarse_samples = j["coarse_samples"].get<int>();
  if (j.contains("refine_tol")) c.line_search.refine_tol = j["refine_tol"].get<double>();
  return c;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  ExperimentConfig c;
  try {
    const json j = json::parse(json_text);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(j,
                   {"experiment", "snr_db", "M", "S", "trials", "seed", "algorithms", "sbl", "irs_grid",
                    "irs_ongrid_grid", "output", "threads", "record_runtime", "write_scenarios"},
                   "config");
    if (!j.contains("experiment")) throw ConfigError("missing key 'experiment'");
    c.experiment = experiment_kind_from_string(j["experiment"].get<std::string>());
    if (j.contains("snr_db")) {
      c.snr_db.clear();
      for (const json& v : j["snr_db"]) c.snr_db.push_back(snr_value(v));
    }
    if (j.contains("M")) c.m_list = j["M"].get<std::vector<Index>>();
    if (j.contains("S")) c.s_list = j["S"].get<std::vector<Index>>();
    if (j.contains("trials")) c.trials = j["trials"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("algorithms")) c.algorithms = j["algorithms"].get<std::vector<std::string>>();
    if (j.contains("sbl")) c.sbl = parse_sbl(j["sbl"]);
    if (j.contains("irs_grid")) c.irs_grid = j["irs_grid"].get<std::vector<Index>>();
    if (j.contains("irs_ongrid_grid")) c.irs_ongrid_grid = j["irs_ongrid_grid"].get<std::vector<Index>>();
    if (j.contains("output")) c.output = j["output"].get<std::string>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
    if (j.contains("record_runtime")) c.record_runtime = j["record_runtime"].get<bool>();
    if (j.contains("write_scenarios")) c.write_scenarios = j["write_scenarios"].get<bool>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

const std::vector<std::string>& metric_names(ExperimentKind k) {
  static const std::vector<std::string> kron{"nmse",           "srr",           "srr_oracle",
                                             "raw_residual2",  "decomposed_residual2",
                                             "denoise_formula", "noise_variance", "em_iters"};
  static const std::vector<std::string> offgrid{"angle_mse", "success", "noise_variance", "em_iters"};
  static const std::vector<std::string> irs{"channel_nmse", "angle_mse_1",    "angle_mse_2",
                                            "angle_mse_3",  "noise_variance", "em_iters"};
  switch (k) {
    case ExperimentKind::kron_sparse: return kron;
    case ExperimentKind::offgrid:
    case ExperimentKind::worst_case: return offgrid;
    case ExperimentKind::irs: return irs;
  }
  return kron;
}

CsvRow ExperimentResult::header() const {
  CsvRow h{"row_type", "algorithm", "snr_db", "m", "s", "trial", "seed"};
  for (const auto& n : metric_names(experiment)) h.push_back(n);
  h.push_back("runtime_s");
  return h;
}

std::vector<CsvRow> ExperimentResult::csv_rows() const {
  std::vector<CsvRow> out;
  for (const TrialRecord& r : rows) {
    CsvRow row{r.row_type, r.algorithm, format_double(r.snr_db), std::to_string(r.m), std::to_string(r.s),
               std::to_string(r.trial), std::to_string(r.seed)};
    for (double v : r.metrics) row.push_back(format_double(v));
    row.push_back(format_double(r.runtime_s));
    out.push_back(std::move(row));
  }
  return out;
}

void ExperimentResult::write_csv(std::ostream& out) const { kronsbl::write_csv(out, header(), csv_rows()); }

double timeit(const std::function<void()>& run) {
  const auto t0 = std::chrono::steady_clock::now();
  run();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

namespace {

struct Point {
  double snr;
  Index m;
  Index s;
};

struct TrialOutput {
  std::vector<TrialRecord> rows;
  std::string scenario;
};

CMatrix kron_matrices(const std::vector<CMatrix>& parts) {
  CMatrix out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = Eigen::kroneckerProduct(out, parts[i]).eval();
  return out;
}

std::vector<double> params_of(const std::vector<Estimate>& est) {
  std::vector<double> p;
  for (const Estimate& e : est) p.push_back(e.param);
  return p;
}

TrialRecord base_record(const ExperimentConfig& cfg, const Point& p, int trial, const std::string& alg) {
  TrialRecord r;
  r.algorithm = alg;
  r.snr_db = p.snr;
  r.m = p.m;
  r.s = p.s;
  r.trial = trial;
  r.seed = cfg.seed ^ static_cast<std::uint64_t>(trial);
  return r;
}

SblConfig quiet(SblConfig c) {
  c.record_traces = false;
  return c;
}

TrialOutput kron_sparse_trial(const ExperimentConfig& cfg, const Point& p, int trial) {
  Rng rng(cfg.seed ^ static_cast<std::uint64_t>(trial));
  KronSparseScene scene = gen_kron_sparse(p.m, rng);
  const NoisyMeasurement noisy = add_noise_at_snr(scene.truth.clean, p.snr, rng);
  scene.truth.noise_variance = noisy.noise_variance;
  const CVector& clean = scene.truth.clean;
  const Index order = static_cast<Index>(scene.x.size());
  const double raw = residual_energy(clean, noisy.y);
  const double formula = noisy.noise_variance * static_cast<double>(order * p.m + 1 - order);
  std::vector<Index> true_support;
  for (Index n = 0; n < scene.x_full.size(); ++n) {
    if (scene.x_full(n) != Complex(0.0, 0.0)) true_support.push_back(n);
  }
  const auto k_true = static_cast<Index>(true_support.size());

  TrialOutput out;
  out.scenario = scenario_json(to_string(cfg.experiment), cfg.seed ^ static_cast<std::uint64_t>(trial), scene.truth);
  SblConfig sc = quiet(cfg.sbl);
  sc.grid_points = static_cast<Index>(scene.grid.size());
  sc.lower = -1.0;
  sc.upper = 1.0;
  sc.grid_update = false;

  CMatrix full;
  for (const std::string& alg : cfg.algorithms) {
    TrialRecord rec = base_record(cfg, p, trial, alg);
    CVector xhat;
    double decomposed = raw;
    double iters = 0.0;
    if (alg == "dsbl_hosvd" || alg == "dsbl_recursive") {
      DsblConfig dc;
      dc.method = alg == "dsbl_hosvd" ? DecompositionMethod::hosvd : DecompositionMethod::recursive;
      dc.per_dimension = {sc};
      const std::vector<ColumnFunction> cols(static_cast<std::size_t>(order), ColumnFunction::steering(p.m));
      DsblResult r;
      rec.runtime_s = timeit([&] { r = run_dsbl(noisy.y, scene.truth.shape, cols, dc); });
      xhat = *r.assembled_x;
      decomposed = residual_energy(clean, recompose(r.factors_used));
      for (const SblResult& d : r.per_dimension) iters = std::max(iters, static_cast<double>(d.em_iters));
    } else {
      if (full.size() == 0) full = kron_matrices(scene.dictionaries);
      if (alg == "sbl_ongrid_full") {
        SblConfig c = sc;
        c.noise_denominator = NoiseDenominator::measurement_count;
        SblResult r;
        rec.runtime_s = timeit([&] { r = run_sbl(noisy.y, full, c); });
        xhat = r.dense_coefficients();
        iters = r.em_iters;
      } else {
        OmpConfig oc;
        if (noisy.noise_variance > 0.0) {
          oc.residual_threshold = static_cast<double>(noisy.y.size()) * noisy.noise_variance;
        } else {
          oc.sparsity = k_true;
        }
        OmpResult r;
        rec.runtime_s = timeit([&] { r = omp(noisy.y, full, oc); });
        xhat = r.coefficients;
        iters = static_cast<double>(r.support.size());
      }
    }
    const std::vector<Index> est_support = support_by_threshold(xhat);
    rec.metrics = {nmse(scene.x_full, xhat),
                   srr(true_support, est_support),
                   srr(true_support, support_top_k(xhat, k_true)),
                   raw,
                   decomposed,
                   formula,
                   noisy.noise_variance,
                   iters};
    out.rows.push_back(std::move(rec));
  }
  return out;
}

TrialOutput offgrid_trial(const ExperimentConfig& cfg, const Point& p, int trial) {
  Rng rng(cfg.seed ^ static_cast<std::uint64_t>(trial));
  OffgridScene scene;
  if (cfg.experiment == ExperimentKind::worst_case) {
    Rng omega_rng(~cfg.seed);
    scene = gen_worst_case(omega_rng);
  } else {
    scene = gen_offgrid_scene(p.m, p.s, rng);
  }
  const NoisyMeasurement noisy = add_noise_at_snr(scene.truth.clean, p.snr, rng);
  scene.truth.noise_variance = noisy.noise_variance;
  const std::vector<double>& truth = scene.truth.params.front();
  const auto s = static_cast<Index>(truth.size());

  TrialOutput out;
  out.scenario = scenario_json(to_string(cfg.experiment), cfg.seed ^ static_cast<std::uint64_t>(trial), scene.truth);
  SblConfig sc = quiet(cfg.sbl);
  if (!sc.top_peaks) sc.top_peaks = s;

  for (const std::string& alg : cfg.algorithms) {
    TrialRecord rec = base_record(cfg, p, trial, alg);
    std::vector<double> est;
    double iters = 0.0;
    if (alg == "offsbl" || alg == "sbl_ongrid_full") {
      SblConfig c = sc;
      c.grid_update = alg == "offsbl";
      if (!c.grid_update) c.noise_denominator = NoiseDenominator::measurement_count;
      SblResult r;
      rec.runtime_s = timeit([&] { r = run_offsbl(noisy.y, scene.column, c); });
      est = params_of(extract_estimates(r, s));
      iters = r.em_iters;
    } else if (alg == "dsbl_hosvd" || alg == "dsbl_recursive") {
      DsblConfig dc;
      dc.method = alg == "dsbl_hosvd" ? DecompositionMethod::hosvd : DecompositionMethod::recursive;
      dc.per_dimension = {sc};
      const std::vector<ColumnFunction> cols{scene.column};
      DsblResult r;
      rec.runtime_s = timeit([&] { r = run_dsbl(noisy.y, scene.truth.shape, cols, dc); });
      est = params_of(extract_estimates(r.per_dimension.front(), s));
      iters = r.per_dimension.front().em_iters;
    } else {
      const ParamGrid grid = init_uniform_grid(sc.grid_points, sc.lower, sc.upper);
      const CMatrix h = build_dictionary(scene.column, grid);
      OmpConfig oc;
      oc.sparsity = s;
      OmpResult r;
      rec.runtime_s = timeit([&] { r = omp(noisy.y, h, oc); });
      for (Index n : r.support) est.push_back(grid[n]);
      while (static_cast<Index>(est.size()) < s) est.push_back(est.empty() ? 0.0 : est.back());
      iters = static_cast<double>(r.support.size());
    }
    const double mse = angle_mse(truth, est);
    rec.metrics = {mse, mse < 1e-6 ? 1.0 : 0.0, noisy.noise_variance, iters};
    out.rows.push_back(std::move(rec));
  }
  return out;
}

TrialOutput irs_trial(const ExperimentConfig& cfg, const Point& p, int trial) {
  Rng rng(cfg.seed ^ static_cast<std::uint64_t>(trial));
  IrsScene scene = gen_irs_scene(rng);
  const NoisyMeasurement noisy = add_noise_at_snr(scene.truth.clean, p.snr, rng);
  scene.truth.noise_variance = noisy.noise_variance;
  const IrsScenario& sc = scene.scenario;
  const IrsDims dims{sc.l, sc.t, sc.r, sc.spacing};
  std::vector<CMatrix> true_channels;
  for (Index k = 0; k < sc.k_i; ++k) true_channels.push_back(cascaded_channel(sc, sc.omega.col(k)));

  TrialOutput out;
  out.scenario = scenario_json(to_string(cfg.experiment), cfg.seed ^ static_cast<std::uint64_t>(trial), scene.truth);
  for (const std::string& alg : cfg.algorithms) {
    TrialRecord rec = base_record(cfg, p, trial, alg);
    const bool ongrid = alg == "dsbl_ongrid";
    DsblConfig dc;
    dc.method = alg == "dsbl_recursive" ? DecompositionMethod::recursive : DecompositionMethod::hosvd;
    dc.per_dimension.clear();
    for (std::size_t i = 0; i < 3; ++i) {
      SblConfig c = quiet(cfg.sbl);
      c.grid_points = (ongrid ? cfg.irs_ongrid_grid : cfg.irs_grid)[i];
      c.lower = -1.0;
      c.upper = 1.0;
      c.grid_update = !ongrid;
      if (ongrid) c.noise_denominator = NoiseDenominator::measurement_count;
      if (!c.top_peaks) c.top_peaks = static_cast<Index>(scene.truth.params[i].size());
      dc.per_dimension.push_back(c);
    }
    DsblResult r;
    rec.runtime_s = timeit([&] { r = run_dsbl(noisy.y, scene.truth.shape, scene.columns, dc); });
    std::vector<CMatrix> est_channels;
    for (Index k = 0; k < sc.k_i; ++k) {
      est_channels.push_back(reconstruct_irs_channel(r.estimates, sc.omega.col(k), dims).reshaped(sc.r, sc.t));
    }
    rec.metrics = {channel_nmse(true_channels, est_channels)};
    double iters = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      const auto s = static_cast<Index>(scene.truth.params[i].size());
      rec.metrics.push_back(angle_mse(scene.truth.params[i], params_of(extract_estimates(r.per_dimension[i], s))));
      iters = std::max(iters, static_cast<double>(r.per_dimension[i].em_iters));
    }
    rec.metrics.push_back(noisy.noise_variance);
    rec.metrics.push_back(iters);
    out.rows.push_back(std::move(rec));
  }
  return out;
}

std::vector<Point> sweep_points(const ExperimentConfig& cfg) {
  std::vector<Point> pts;
  for (double snr : cfg.snr_db) {
    switch (cfg.experiment) {
      case ExperimentKind::kron_sparse:
        for (Index m : cfg.m_list) pts.push_back({snr, m, 4});
        break;
      case ExperimentKind::offgrid:
        for (Index m : cfg.m_list) {
          for (Index s : cfg.s_list) pts.push_back({snr, m, s});
        }
        break;
      case ExperimentKind::worst_case:
        pts.push_back({snr, 60, static_cast<Index>(kWorstCaseTruths.size())});
        break;
      case ExperimentKind::irs:
        pts.push_back({snr, 0, 0});
        break;
    }
  }
  return pts;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<Point> points = sweep_points(cfg);
  const std::size_t n_tasks = points.size() * static_cast<std::size_t>(cfg.trials);
  std::vector<TrialOutput> outputs(n_tasks);

  auto run_task = [&](std::size_t task) {
    const Point& p = points[task / static_cast<std::size_t>(cfg.trials)];
    const int trial = static_cast<int>(task % static_cast<std::size_t>(cfg.trials));
    switch (cfg.experiment) {
      case ExperimentKind::kron_sparse: return kron_sparse_trial(cfg, p, trial);
      case ExperimentKind::offgrid:
      case ExperimentKind::worst_case: return offgrid_trial(cfg, p, trial);
      case ExperimentKind::irs: return irs_trial(cfg, p, trial);
    }
    return TrialOutput{};
  };

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (std::size_t t = next++; t < n_tasks; t = next++) {
      try {
        outputs[t] = run_task(t);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n_tasks;
      }
    }
  };
  const auto n_threads = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), n_tasks));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult res;
  res.experiment = cfg.experiment;
  for (TrialOutput& o : outputs) {
    for (TrialRecord& r : o.rows) {
      if (!cfg.record_runtime) r.runtime_s = 0.0;
      res.rows.push_back(std::move(r));
    }
    if (cfg.write_scenarios) res.scenarios.push_back(std::move(o.scenario));
  }

  const std::size_t n_metrics = metric_names(cfg.experiment).size();
  const std::size_t n_algs = cfg.algorithms.size();
  const auto trials = static_cast<std::size_t>(cfg.trials);
  std::vector<TrialRecord> aggregates;
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    for (std::size_t a = 0; a < n_algs; ++a) {
      std::vector<std::vector<double>> cols(n_metrics + 1);
      for (std::size_t t = 0; t < trials; ++t) {
        const TrialRecord& r = res.rows[(pi * trials + t) * n_algs + a];
        for (std::size_t k = 0; k < n_metrics; ++k) cols[k].push_back(r.metrics[k]);
        cols[n_metrics].push_back(r.runtime_s);
      }
      for (const char* kind : {"mean", "median"}) {
        TrialRecord agg = base_record(cfg, points[pi], -1, cfg.algorithms[a]);
        agg.row_type = kind;
        agg.seed = cfg.seed;
        const bool is_mean = std::string_view(kind) == "mean";
        for (std::size_t k = 0; k < n_metrics; ++k) agg.metrics.push_back(is_mean ? mean(cols[k]) : median(cols[k]));
        agg.runtime_s = is_mean ? mean(cols[n_metrics]) : median(cols[n_metrics]);
        aggregates.push_back(std::move(agg));
      }
    }
  }
  for (TrialRecord& r : aggregates) res.rows.push_back(std::move(r));
  return res;
}

}  // namespace kronsbl
