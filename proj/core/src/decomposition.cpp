#include "kronsbl/decomposition.hpp"

#include <string>

namespace kronsbl {

std::string_view to_string(DecompositionMethod m) {
  return m == DecompositionMethod::hosvd ? "hosvd" : "recursive";
}

DecompositionMethod decomposition_method_from_string(std::string_view s) {
  if (s == "hosvd") return DecompositionMethod::hosvd;
  if (s == "recursive") return DecompositionMethod::recursive;
  throw ConfigError("unknown decomposition method '" + std::string(s) + "'");
}

namespace {

void check_input(const CVector& ybar, std::span<const Index> shape) {
  if (shape.empty()) throw DimensionError("decomposition needs at least one dimension");
  for (Index m : shape) {
    if (m <= 0) throw DimensionError("decomposition: dimensions must be positive");
  }
  if (ybar.size() != shape_size(shape)) {
    throw DimensionError("decomposition: measurement length " + std::to_string(ybar.size()) +
                         " != product of dimensions " + std::to_string(shape_size(shape)));
  }
  if (ybar.squaredNorm() == 0.0) throw DegenerateInput("decomposition: zero measurement");
}

// Splits the carried last factor into core scale times a phase-normalized unit
// vector.
Complex split_scale(const CVector& last) {
  CVector e = last.normalized();
  const Complex rot = normalize_phase(e);
  // last = |last| * e / rot
  return last.norm() / rot;
}

void finish(DecompositionResult& r, const CVector& ybar) {
  r.residual_norm = (ybar - recompose(r)).norm();
}

}  // namespace

DecompositionResult hosvd_rank1(const CVector& ybar, std::span<const Index> shape) {
  check_input(ybar, shape);
  const ComplexTensor t = from_kron_vector(ybar, Shape(shape.begin(), shape.end()));
  const Index order = t.order();

  std::vector<CVector> e(static_cast<std::size_t>(order));
  for (Index i = 0; i < order; ++i) {
    e[static_cast<std::size_t>(i)] = leading_singular_pair(mode_matricize(t, i)).u;
  }

  // xi = T x_0 e_0^H ... x_{I-1} e_{I-1}^H, contracting the leading mode each time.
  ComplexTensor core = t;
  for (Index i = 0; i < order; ++i) {
    core = mode_vector_product(core, e[static_cast<std::size_t>(i)].conjugate(), 0);
  }

  DecompositionResult r;
  r.method = DecompositionMethod::hosvd;
  r.core_scale = core.data()[0];
  r.factors = std::move(e);
  r.factors.back() *= r.core_scale;
  finish(r, ybar);
  return r;
}

DecompositionResult recursive_rank1(const CVector& ybar, std::span<const Index> shape) {
  check_input(ybar, shape);
  const auto order = shape.size();

  DecompositionResult r;
  r.method = DecompositionMethod::recursive;
  CVector carried = ybar;
  for (std::size_t i = 0; i + 1 < order; ++i) {
    const Index rows = shape[i];
    const Index cols = carried.size() / rows;
    // Row m holds the entries whose i-th index is m (slowest remaining index).
    const CMatrix view =
        Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            carried.data(), rows, cols);
    CVector z = leading_singular_pair(view).u;
    // Best companion vector for a fixed unit z: z_bar = view^T conj(z).
    CVector next = view.transpose() * z.conjugate();
    r.factors.push_back(std::move(z));
    carried = std::move(next);
  }
  r.core_scale = split_scale(carried);
  r.factors.push_back(std::move(carried));
  finish(r, ybar);
  return r;
}

DecompositionResult decompose(const CVector& ybar, std::span<const Index> shape,
                              DecompositionMethod method) {
  return method == DecompositionMethod::hosvd ? hosvd_rank1(ybar, shape)
                                              : recursive_rank1(ybar, shape);
}

CVector recompose(const DecompositionResult& result) {
  return kron_vectors(std::span<const CVector>(result.factors));
}

}  // namespace kronsbl
