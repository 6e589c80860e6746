#pragma once

#include <memory>
#include <span>
#include <vector>

#include "kronsbl/tensor.hpp"

namespace kronsbl {

/// Uniform linear array response in the spatial-frequency domain u = cos(angle):
/// entry q is exp(j 2 pi spacing q u) / sqrt(Q).
CVector steering_column(Index aperture, double spacing, double u);

/// Continuous dictionary column h(u): a steering vector, optionally left
/// multiplied by a known compression matrix B (size M x Q).
///
/// Immutable; copies share the compression matrix.
class ColumnFunction {
 public:
  static ColumnFunction steering(Index aperture, double spacing = 0.5);
  /// Throws DimensionError unless compression.cols() == aperture.
  static ColumnFunction compressed(CMatrix compression, Index aperture, double spacing = 0.5);

  Index output_dim() const;
  Index aperture() const { return aperture_; }
  double spacing() const { return spacing_; }
  bool is_compressed() const { return compression_ != nullptr; }
  /// Empty matrix for a plain steering function.
  const CMatrix& compression() const;

  CVector operator()(double u) const;
  void evaluate_into(double u, Eigen::Ref<CVector> out) const;

 private:
  ColumnFunction(Index aperture, double spacing, std::shared_ptr<const CMatrix> b);

  Index aperture_ = 1;
  double spacing_ = 0.5;
  std::shared_ptr<const CMatrix> compression_;
};

/// Sorted grid of parameter values inside [lower, upper].
class ParamGrid {
 public:
  ParamGrid(std::vector<double> points, double lower, double upper);

  const std::vector<double>& points() const { return points_; }
  Index size() const { return static_cast<Index>(points_.size()); }
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  double operator[](Index n) const { return points_[static_cast<std::size_t>(n)]; }

 private:
  std::vector<double> points_;
  double lower_;
  double upper_;
};

/// N points lower + (upper - lower) (n - 1) / N, n = 1..N. For [-1, 1] this is
/// u_n = 2 (n - 1) / N - 1. Throws ConfigError for N < 2.
ParamGrid init_uniform_grid(Index n, double lower = -1.0, double upper = 1.0);

/// Column n is f(points[n]).
CMatrix build_dictionary(const ColumnFunction& f, std::span<const double> points);
CMatrix build_dictionary(const ColumnFunction& f, const ParamGrid& grid);

}  // namespace kronsbl
