#pragma once

#include <optional>
#include <span>
#include <vector>

#include "kronsbl/decomposition.hpp"
#include "kronsbl/dictionary.hpp"
#include "kronsbl/offsbl.hpp"

namespace kronsbl {

struct DsblConfig {
  DecompositionMethod method = DecompositionMethod::hosvd;
  /// One solver config per dimension, or a single config shared by all.
  std::vector<SblConfig> per_dimension{SblConfig{}};
  /// Solve the per-dimension problems on separate threads.
  bool parallel = false;

  const SblConfig& for_dimension(std::size_t i) const;
};

struct DsblResult {
  std::vector<SblResult> per_dimension;
  DecompositionResult factors_used;
  /// Kronecker product of the per-dimension coefficients on the initial
  /// grids; present only when no dimension moved its grid.
  std::optional<CVector> assembled_x;
  /// Active (grid point, coefficient) pairs per dimension, sorted by parameter.
  std::vector<std::vector<Estimate>> estimates;
};

/// Decompose ybar into I factors and solve factor_i = H_i(psi) x_i + n_i for
/// every dimension with OffSBL. The scale of the decomposition stays in the
/// last factor.
DsblResult run_dsbl(const CVector& ybar, std::span<const Index> shape,
                    std::span<const ColumnFunction> columns, const DsblConfig& cfg);

/// (x)_i x_i of the per-dimension coefficient vectors on their initial grids.
CVector reconstruct_kron_estimate(const DsblResult& result);
CVector reconstruct_kron_estimate(std::span<const CVector> per_dimension);

/// Sizes of the cascaded IRS channel.
struct IrsDims {
  Index irs_elements = 256;  ///< L
  Index ms_antennas = 6;     ///< T
  Index bs_antennas = 16;    ///< R
  double spacing = 0.5;
};

/// vec of the R x T cascaded channel for IRS configuration omega (column-major):
/// [omega^T A_L(psi_1) x_1 * A_T(psi_2) x_2] (x) [A_R(psi_3) x_3].
/// Throws DimensionError unless three estimate sets and |omega| = L are given.
CVector reconstruct_irs_channel(std::span<const std::vector<Estimate>> estimates, const CVector& omega,
                                const IrsDims& dims);

}  // namespace kronsbl
