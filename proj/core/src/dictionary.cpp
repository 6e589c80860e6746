#include "kronsbl/dictionary.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace kronsbl {

CVector steering_column(Index aperture, double spacing, double u) {
  if (aperture < 1) throw DimensionError("steering_column: aperture must be >= 1");
  CVector a(aperture);
  const double scale = 1.0 / std::sqrt(static_cast<double>(aperture));
  const double phase = 2.0 * std::numbers::pi * spacing * u;
  for (Index q = 0; q < aperture; ++q) a[q] = std::polar(scale, phase * static_cast<double>(q));
  return a;
}

ColumnFunction::ColumnFunction(Index aperture, double spacing, std::shared_ptr<const CMatrix> b)
    : aperture_(aperture), spacing_(spacing), compression_(std::move(b)) {
  if (aperture_ < 1) throw DimensionError("column function: aperture must be >= 1");
}

ColumnFunction ColumnFunction::steering(Index aperture, double spacing) {
  return ColumnFunction(aperture, spacing, nullptr);
}

ColumnFunction ColumnFunction::compressed(CMatrix compression, Index aperture, double spacing) {
  if (compression.rows() == 0) throw DimensionError("column function: empty compression matrix");
  if (compression.cols() != aperture) {
    throw DimensionError("column function: compression has " + std::to_string(compression.cols()) +
                         " columns but the steering aperture is " + std::to_string(aperture));
  }
  return ColumnFunction(aperture, spacing, std::make_shared<const CMatrix>(std::move(compression)));
}

Index ColumnFunction::output_dim() const {
  return compression_ ? compression_->rows() : aperture_;
}

const CMatrix& ColumnFunction::compression() const {
  static const CMatrix kEmpty;
  return compression_ ? *compression_ : kEmpty;
}

void ColumnFunction::evaluate_into(double u, Eigen::Ref<CVector> out) const {
  if (out.size() != output_dim()) throw DimensionError("column function: output size mismatch");
  if (compression_) {
    out.noalias() = *compression_ * steering_column(aperture_, spacing_, u);
  } else {
    out = steering_column(aperture_, spacing_, u);
  }
}

CVector ColumnFunction::operator()(double u) const {
  CVector out(output_dim());
  evaluate_into(u, out);
  return out;
}

ParamGrid::ParamGrid(std::vector<double> points, double lower, double upper)
    : points_(std::move(points)), lower_(lower), upper_(upper) {
  if (points_.empty()) throw ConfigError("grid must be nonempty");
  if (!(lower_ < upper_)) throw ConfigError("grid bounds must satisfy lower < upper");
  for (std::size_t n = 0; n < points_.size(); ++n) {
    if (points_[n] < lower_ || points_[n] > upper_) throw ConfigError("grid point outside bounds");
    if (n > 0 && !(points_[n - 1] < points_[n])) {
      throw ConfigError("grid points must be strictly increasing");
    }
  }
}

ParamGrid init_uniform_grid(Index n, double lower, double upper) {
  if (n < 2) throw ConfigError("init_uniform_grid: need at least 2 points, got " + std::to_string(n));
  std::vector<double> pts(static_cast<std::size_t>(n));
  const double width = upper - lower;
  for (Index k = 0; k < n; ++k) {
    pts[static_cast<std::size_t>(k)] =
        lower + width * static_cast<double>(k) / static_cast<double>(n);
  }
  return ParamGrid(std::move(pts), lower, upper);
}

CMatrix build_dictionary(const ColumnFunction& f, std::span<const double> points) {
  if (points.empty()) throw DimensionError("build_dictionary: empty grid");
  CMatrix h(f.output_dim(), static_cast<Index>(points.size()));
  for (std::size_t n = 0; n < points.size(); ++n) f.evaluate_into(points[n], h.col(static_cast<Index>(n)));
  return h;
}

CMatrix build_dictionary(const ColumnFunction& f, const ParamGrid& grid) {
  return build_dictionary(f, std::span<const double>(grid.points()));
}

}  // namespace kronsbl
