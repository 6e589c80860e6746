#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "kronsbl/csv.hpp"
#include "kronsbl/offsbl.hpp"

namespace kronsbl {

enum class ExperimentKind { kron_sparse, offgrid, worst_case, irs };

std::string_view to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(std::string_view s);

/// Algorithm names accepted in a config.
///   dsbl_hosvd, dsbl_recursive  decomposition + per-dimension SBL
///   dsbl_ongrid                 HOSVD + on-grid SBL per dimension (irs only)
///   offsbl                      OffSBL on the undecomposed problem (offgrid, worst_case)
///   sbl_ongrid_full             classical on-grid SBL (noise update g / M) on the full
///                               (Kronecker) dictionary
///   omp_full                    OMP on the full (Kronecker) dictionary
const std::vector<std::string>& known_algorithms();

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kron_sparse;
  std::vector<double> snr_db{20.0};  ///< "inf" in JSON for noiseless
  std::vector<Index> m_list{10};
  std::vector<Index> s_list{4};
  int trials = 1;
  std::uint64_t seed = 1;
  std::vector<std::string> algorithms{"dsbl_hosvd"};
  SblConfig sbl;  ///< solver overrides; grid sizes are fixed per experiment except offgrid/worst_case
  std::vector<Index> irs_grid{180, 50, 50};
  std::vector<Index> irs_ongrid_grid{180, 150, 150};
  std::string output;
  int threads = 1;
  bool record_runtime = true;
  bool write_scenarios = false;

  void validate() const;
};

/// Parses the JSON config format; unknown keys are rejected. Throws ConfigError.
ExperimentConfig parse_experiment_config(std::string_view json_text);
ExperimentConfig load_experiment_config(const std::string& path);

/// Metric columns of one experiment, in CSV order.
const std::vector<std::string>& metric_names(ExperimentKind k);

struct TrialRecord {
  std::string row_type = "trial";  ///< trial, mean or median
  std::string algorithm;
  double snr_db = 0.0;
  Index m = 0;
  Index s = 0;
  int trial = -1;  ///< -1 on aggregate rows
  std::uint64_t seed = 0;
  std::vector<double> metrics;
  double runtime_s = 0.0;
};

struct ExperimentResult {
  ExperimentKind experiment = ExperimentKind::kron_sparse;
  std::vector<TrialRecord> rows;  ///< trial rows, then aggregates
  std::vector<std::string> scenarios;  ///< JSON per (sweep point, trial) when requested

  CsvRow header() const;
  std::vector<CsvRow> csv_rows() const;
  void write_csv(std::ostream& out) const;
};

/// Runs every sweep point x trial x algorithm. Trials go to a pool of
/// cfg.threads workers; rows come out in a fixed order, so the thread count
/// never changes the result. Trial t uses the stream Rng(seed ^ t).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Wall time of one call on the steady clock.
double timeit(const std::function<void()>& run);

}  // namespace kronsbl
