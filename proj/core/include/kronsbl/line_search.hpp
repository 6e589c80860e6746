#pragma once

#include <functional>

namespace kronsbl {

struct LineSearchConfig {
  int coarse_samples = 33;
  /// Golden-section stopping width, relative to the width of the full
  /// parameter range handed to the solver.
  double refine_tol = 1e-8;
};

/// Bounded scalar minimization.
///
/// Evaluates f on `coarse_samples` uniform points of [lo, hi] (endpoints
/// included), refines the bracket around the best sample by golden-section
/// search down to `abs_tol`, and returns the best point seen. The incumbent is
/// always a candidate and wins ties, so f(result) <= f(incumbent).
double line_search_1d(const std::function<double(double)>& f, double lo, double hi,
                      double incumbent, int coarse_samples, double abs_tol);

}  // namespace kronsbl
