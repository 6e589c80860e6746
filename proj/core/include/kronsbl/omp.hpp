#pragma once

#include <optional>
#include <vector>

#include "kronsbl/tensor.hpp"

namespace kronsbl {

/// At least one stopping rule must be set; the first one met stops.
struct OmpConfig {
  std::optional<Index> sparsity;             ///< stop after K atoms
  std::optional<double> residual_threshold;  ///< stop once ||r||^2 <= tau_r

  void validate() const;
};

struct OmpResult {
  CVector coefficients;
  std::vector<Index> support;  ///< in selection order
  /// ||r|| before the first selection and after every step.
  std::vector<double> residual_norms;
};

/// Orthogonal matching pursuit: pick the column with the largest normalized
/// correlation |h_n^H r| / ||h_n|| (smallest index on ties), refit by least
/// squares on the selected set. Throws DegenerateInput for a zero column or
/// when a selected set becomes rank deficient.
OmpResult omp(const CVector& y, const CMatrix& h, const OmpConfig& cfg);

}  // namespace kronsbl
