#include "kronsbl/metrics.hpp"

#include <algorithm>
#include <numeric>

namespace kronsbl {

double nmse(const CVector& truth, const CVector& estimate) {
  if (truth.size() != estimate.size()) throw DimensionError("nmse: length mismatch");
  const double denom = truth.squaredNorm();
  if (!(denom > 0.0)) throw DegenerateInput("nmse: zero truth");
  return (truth - estimate).squaredNorm() / denom;
}

double srr(std::span<const Index> truth, std::span<const Index> estimate) {
  std::vector<Index> a(truth.begin(), truth.end());
  std::vector<Index> b(estimate.begin(), estimate.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  std::vector<Index> both, either;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(either));
  if (either.empty()) throw DegenerateInput("srr: both supports empty");
  return static_cast<double>(both.size()) / static_cast<double>(either.size());
}

std::vector<Index> support_by_threshold(const CVector& x, double rel) {
  std::vector<Index> out;
  if (x.size() == 0) return out;
  const RVector mag = x.cwiseAbs();
  const double top = mag.maxCoeff();
  if (!(top > 0.0)) return out;
  for (Index n = 0; n < x.size(); ++n) {
    if (mag(n) >= rel * top) out.push_back(n);
  }
  return out;
}

std::vector<Index> support_top_k(const CVector& x, Index k) {
  const RVector mag = x.cwiseAbs();
  std::vector<Index> idx(static_cast<std::size_t>(x.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  const auto keep = static_cast<std::size_t>(std::clamp<Index>(k, 0, x.size()));
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(keep), idx.end(),
                    [&](Index a, Index b) { return mag(a) > mag(b) || (mag(a) == mag(b) && a < b); });
  idx.resize(keep);
  std::sort(idx.begin(), idx.end());
  return idx;
}

double angle_mse(std::vector<double> truth, std::vector<double> estimate) {
  if (truth.size() != estimate.size()) throw DimensionError("angle_mse: count mismatch");
  if (truth.empty()) throw DimensionError("angle_mse: empty lists");
  std::sort(truth.begin(), truth.end());
  std::sort(estimate.begin(), estimate.end());
  double acc = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) acc += (truth[k] - estimate[k]) * (truth[k] - estimate[k]);
  return acc / static_cast<double>(truth.size());
}

double success_probability(std::span<const double> mse, double threshold) {
  if (mse.empty()) throw DimensionError("success_probability: empty list");
  const auto hits = std::count_if(mse.begin(), mse.end(), [&](double v) { return v < threshold; });
  return static_cast<double>(hits) / static_cast<double>(mse.size());
}

double channel_nmse(std::span<const CMatrix> truth, std::span<const CMatrix> estimate) {
  if (truth.size() != estimate.size() || truth.empty()) throw DimensionError("channel_nmse: count mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    if (truth[k].rows() != estimate[k].rows() || truth[k].cols() != estimate[k].cols()) {
      throw DimensionError("channel_nmse: shape mismatch");
    }
    const double denom = truth[k].squaredNorm();
    if (!(denom > 0.0)) throw DegenerateInput("channel_nmse: zero true channel");
    acc += (truth[k] - estimate[k]).squaredNorm() / denom;
  }
  return acc / static_cast<double>(truth.size());
}

double residual_energy(const CVector& clean, const CVector& processed) {
  if (clean.size() != processed.size()) throw DimensionError("residual_energy: length mismatch");
  return (processed - clean).squaredNorm();
}

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median(std::span<const double> v) {
  if (v.empty()) return 0.0;
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  const std::size_t h = s.size() / 2;
  return s.size() % 2 == 1 ? s[h] : 0.5 * (s[h - 1] + s[h]);
}

}  // namespace kronsbl
