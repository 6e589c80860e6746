#include "kronsbl/dsbl.hpp"

#include <future>

namespace kronsbl {

const SblConfig& DsblConfig::for_dimension(std::size_t i) const {
  if (per_dimension.empty()) throw ConfigError("dsbl config: no solver config");
  return per_dimension.size() == 1 ? per_dimension.front() : per_dimension.at(i);
}

DsblResult run_dsbl(const CVector& ybar, std::span<const Index> shape,
                    std::span<const ColumnFunction> columns, const DsblConfig& cfg) {
  const std::size_t order = shape.size();
  if (columns.size() != order) throw DimensionError("run_dsbl: need one column function per dimension");
  if (cfg.per_dimension.size() != 1 && cfg.per_dimension.size() != order) {
    throw ConfigError("dsbl config: per_dimension must hold 1 or I entries");
  }
  for (std::size_t i = 0; i < order; ++i) {
    if (columns[i].output_dim() != shape[i]) throw DimensionError("run_dsbl: column length differs from shape");
    cfg.for_dimension(i).validate();
  }

  DsblResult out;
  out.factors_used = decompose(ybar, shape, cfg.method);
  out.per_dimension.resize(order);
  auto solve = [&](std::size_t i) {
    return run_offsbl(out.factors_used.factors[i], columns[i], cfg.for_dimension(i));
  };
  if (cfg.parallel && order > 1) {
    std::vector<std::future<SblResult>> jobs;
    for (std::size_t i = 0; i < order; ++i) jobs.push_back(std::async(std::launch::async, solve, i));
    for (std::size_t i = 0; i < order; ++i) out.per_dimension[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < order; ++i) out.per_dimension[i] = solve(i);
  }

  bool on_grid = true;
  for (std::size_t i = 0; i < order; ++i) {
    out.estimates.push_back(all_estimates(out.per_dimension[i]));
    on_grid = on_grid && !cfg.for_dimension(i).grid_update;
  }
  if (on_grid) out.assembled_x = reconstruct_kron_estimate(out);
  return out;
}

CVector reconstruct_kron_estimate(const DsblResult& result) {
  std::vector<CVector> parts;
  for (const SblResult& r : result.per_dimension) parts.push_back(r.dense_coefficients());
  return reconstruct_kron_estimate(parts);
}

CVector reconstruct_kron_estimate(std::span<const CVector> per_dimension) {
  return kron_vectors(per_dimension);
}

CVector reconstruct_irs_channel(std::span<const std::vector<Estimate>> estimates, const CVector& omega,
                                const IrsDims& dims) {
  if (estimates.size() != 3) throw DimensionError("reconstruct_irs_channel: need three estimate sets");
  if (omega.size() != dims.irs_elements) throw DimensionError("reconstruct_irs_channel: omega length differs from L");
  auto combine = [&](const std::vector<Estimate>& est, Index aperture) {
    CVector v = CVector::Zero(aperture);
    for (const Estimate& e : est) v += e.coef * steering_column(aperture, dims.spacing, e.param);
    return v;
  };
  const Complex irs = omega.transpose() * combine(estimates[0], dims.irs_elements);
  const CVector ms = irs * combine(estimates[1], dims.ms_antennas);
  const CVector bs = combine(estimates[2], dims.bs_antennas);
  return kron_vectors({ms, bs});
}

}  // namespace kronsbl
