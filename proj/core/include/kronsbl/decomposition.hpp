#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "kronsbl/tensor.hpp"

namespace kronsbl {

enum class DecompositionMethod { hosvd, recursive };

std::string_view to_string(DecompositionMethod m);
DecompositionMethod decomposition_method_from_string(std::string_view s);

/// Rank-(1,...,1) factors of a Kronecker measurement.
///
/// factors[0..I-2] are unit norm and phase-normalized; factors[I-1] carries
/// the whole magnitude and phase, factors[I-1] = core_scale * e_{I-1}.
struct DecompositionResult {
  std::vector<CVector> factors;
  DecompositionMethod method = DecompositionMethod::hosvd;
  Complex core_scale{0.0, 0.0};
  double residual_norm = 0.0;  ///< || ybar - (x)_i factors_i ||_2
};

/// Truncated HOSVD: one leading left singular vector per mode unfolding, core
/// scale from contracting the measurement tensor with every e_i^H.
DecompositionResult hosvd_rank1(const CVector& ybar, std::span<const Index> shape);

/// Sequential rank-one splits: the current vector is viewed as an
/// M_i x prod_{j>i} M_j array (row m_i), its best rank-one approximation
/// z_i z_bar^T gives the unit factor z_i, and z_bar is carried on.
DecompositionResult recursive_rank1(const CVector& ybar, std::span<const Index> shape);

DecompositionResult decompose(const CVector& ybar, std::span<const Index> shape,
                              DecompositionMethod method);

/// Kronecker product of the factors.
CVector recompose(const DecompositionResult& result);

}  // namespace kronsbl
