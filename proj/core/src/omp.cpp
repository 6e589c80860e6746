#include "kronsbl/omp.hpp"

#include <algorithm>
#include <cmath>

namespace kronsbl {

void OmpConfig::validate() const {
  if (!sparsity && !residual_threshold) throw ConfigError("omp config: set sparsity or residual_threshold");
  if (sparsity && *sparsity < 1) throw ConfigError("omp config: sparsity must be at least 1");
  if (residual_threshold && !(*residual_threshold > 0.0)) {
    throw ConfigError("omp config: residual_threshold must be positive");
  }
}

OmpResult omp(const CVector& y, const CMatrix& h, const OmpConfig& cfg) {
  cfg.validate();
  if (h.rows() != y.size()) throw DimensionError("omp: dictionary rows do not match measurement length");
  const RVector norms = h.colwise().norm().transpose();
  if ((norms.array() <= 0.0).any()) throw DegenerateInput("omp: dictionary has a zero column");

  const Index m = h.rows();
  const Index max_atoms = std::min({cfg.sparsity.value_or(m), m, h.cols()});
  OmpResult res;
  res.coefficients = CVector::Zero(h.cols());

  CMatrix q(m, max_atoms);  // orthonormal basis of the selected columns
  CMatrix r = CMatrix::Zero(max_atoms, max_atoms);
  CVector qy(max_atoms);
  CVector resid = y;
  res.residual_norms.push_back(resid.norm());
  std::vector<char> used(static_cast<std::size_t>(h.cols()), 0);

  auto done = [&]() {
    const double r2 = resid.squaredNorm();
    if (r2 == 0.0) return true;
    return cfg.residual_threshold && r2 <= *cfg.residual_threshold;
  };

  Index k = 0;
  while (k < max_atoms && !done()) {
    const RVector corr = (h.adjoint() * resid).cwiseAbs().cwiseQuotient(norms);
    Index best = -1;
    for (Index n = 0; n < h.cols(); ++n) {
      if (used[static_cast<std::size_t>(n)]) continue;
      if (best < 0 || corr(n) > corr(best)) best = n;
    }
    if (best < 0 || !(corr(best) > 0.0)) break;

    CVector v = h.col(best);
    for (int pass = 0; pass < 2; ++pass) {
      const CVector c = q.leftCols(k).adjoint() * v;
      v -= q.leftCols(k) * c;
      r.col(k).head(k) += c;
    }
    const double vn = v.norm();
    if (!(vn > 1e-12 * norms(best))) throw DegenerateInput("omp: selected columns are linearly dependent");
    r(k, k) = vn;
    q.col(k) = v / vn;
    qy(k) = q.col(k).dot(y);
    resid -= q.col(k) * qy(k);
    used[static_cast<std::size_t>(best)] = 1;
    res.support.push_back(best);
    res.residual_norms.push_back(resid.norm());
    ++k;
  }

  if (k > 0) {
    const CVector c = r.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(qy.head(k));
    for (Index j = 0; j < k; ++j) res.coefficients(res.support[static_cast<std::size_t>(j)]) = c(j);
  }
  return res;
}

}  // namespace kronsbl
