#include "kronsbl/tensor.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace kronsbl {

Index shape_size(std::span<const Index> shape) {
  Index n = 1;
  for (Index m : shape) n *= m;
  return n;
}

ComplexTensor::ComplexTensor(Shape shape, CVector data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  for (Index m : shape_) {
    if (m <= 0) throw DimensionError("tensor dimensions must be positive");
  }
  if (data_.size() != shape_size(shape_)) {
    throw DimensionError("tensor buffer length " + std::to_string(data_.size()) +
                         " does not match shape size " + std::to_string(shape_size(shape_)));
  }
}

ComplexTensor ComplexTensor::zeros(Shape shape) {
  const Index n = shape_size(shape);
  return ComplexTensor(std::move(shape), CVector::Zero(n));
}

Index ComplexTensor::flat_index(std::span<const Index> multi) const {
  if (multi.size() != shape_.size()) throw DimensionError("multi-index has wrong order");
  Index k = 0;
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (multi[i] < 0 || multi[i] >= shape_[i]) throw DimensionError("multi-index out of range");
    k = k * shape_[i] + multi[i];
  }
  return k;
}

Shape ComplexTensor::multi_index(Index flat) const {
  if (flat < 0 || flat >= size()) throw DimensionError("flat index out of range");
  Shape multi(shape_.size());
  for (std::size_t i = shape_.size(); i-- > 0;) {
    multi[i] = flat % shape_[i];
    flat /= shape_[i];
  }
  return multi;
}

CVector kron_vectors(std::span<const CVector> factors) {
  if (factors.empty()) throw DimensionError("kron_vectors needs at least one factor");
  CVector out = factors[0];
  if (out.size() == 0) throw DimensionError("kron_vectors: empty factor");
  for (std::size_t f = 1; f < factors.size(); ++f) {
    const CVector& y = factors[f];
    if (y.size() == 0) throw DimensionError("kron_vectors: empty factor");
    CVector next(out.size() * y.size());
    for (Index a = 0; a < out.size(); ++a) next.segment(a * y.size(), y.size()) = out[a] * y;
    out = std::move(next);
  }
  return out;
}

CVector kron_vectors(std::initializer_list<CVector> factors) {
  return kron_vectors(std::span<const CVector>(factors.begin(), factors.size()));
}

ComplexTensor from_kron_vector(const CVector& v, Shape shape) {
  return ComplexTensor(std::move(shape), v);
}

namespace {

void check_mode(const ComplexTensor& t, Index mode) {
  if (mode < 0 || mode >= t.order()) {
    throw DimensionError("mode " + std::to_string(mode) + " out of range for order-" +
                         std::to_string(t.order()) + " tensor");
  }
}

// Splits the shape around `mode` into (outer, M_mode, inner) for the
// slowest-first layout.
struct ModeSplit {
  Index outer = 1;
  Index mid = 1;
  Index inner = 1;
};

ModeSplit split_at(const ComplexTensor& t, Index mode) {
  ModeSplit s;
  for (Index j = 0; j < t.order(); ++j) {
    if (j < mode) s.outer *= t.dim(j);
    if (j > mode) s.inner *= t.dim(j);
  }
  s.mid = t.dim(mode);
  return s;
}

}  // namespace

CMatrix mode_matricize(const ComplexTensor& t, Index mode) {
  check_mode(t, mode);
  const Index order = t.order();
  const Index rows = t.dim(mode);
  const Index cols = t.size() / rows;

  // Column stride of every other dimension: lowest dimension fastest.
  std::vector<Index> col_stride(static_cast<std::size_t>(order), 0);
  Index stride = 1;
  for (Index j = 0; j < order; ++j) {
    if (j == mode) continue;
    col_stride[static_cast<std::size_t>(j)] = stride;
    stride *= t.dim(j);
  }

  CMatrix out(rows, cols);
  Shape multi(static_cast<std::size_t>(order), 0);
  for (Index k = 0; k < t.size(); ++k) {
    Index col = 0;
    for (Index j = 0; j < order; ++j) col += multi[static_cast<std::size_t>(j)] * col_stride[static_cast<std::size_t>(j)];
    out(multi[static_cast<std::size_t>(mode)], col) = t.data()[k];
    // advance the slowest-first counter
    for (Index j = order - 1; j >= 0; --j) {
      auto& m = multi[static_cast<std::size_t>(j)];
      if (++m < t.dim(j)) break;
      m = 0;
    }
  }
  return out;
}

ComplexTensor mode_vector_product(const ComplexTensor& t, const CVector& w, Index mode) {
  check_mode(t, mode);
  if (w.size() != t.dim(mode)) {
    throw DimensionError("mode_vector_product: vector length " + std::to_string(w.size()) +
                         " != dimension " + std::to_string(t.dim(mode)));
  }
  const ModeSplit s = split_at(t, mode);
  Shape shape = t.shape();
  shape.erase(shape.begin() + mode);

  CVector out = CVector::Zero(s.outer * s.inner);
  const CVector& d = t.data();
  for (Index o = 0; o < s.outer; ++o) {
    auto dst = out.segment(o * s.inner, s.inner);
    for (Index m = 0; m < s.mid; ++m) dst += w[m] * d.segment((o * s.mid + m) * s.inner, s.inner);
  }
  return ComplexTensor(std::move(shape), std::move(out));
}

Complex normalize_phase(CVector& u) {
  if (u.size() == 0) return {1.0, 0.0};
  Index arg = 0;
  double best = -1.0;
  for (Index k = 0; k < u.size(); ++k) {
    const double mag = std::abs(u[k]);
    if (mag > best) {
      best = mag;
      arg = k;
    }
  }
  if (best <= 0.0) return {1.0, 0.0};
  const Complex rot = std::conj(u[arg]) / best;
  u *= rot;
  u[arg] = Complex(std::abs(u[arg]), 0.0);
  return rot;
}

namespace {

SingularPair power_iteration(const CMatrix& a) {
  constexpr double kTol = 1e-12;
  constexpr int kMaxIters = 500;

  Index start = 0;
  a.colwise().squaredNorm().maxCoeff(&start);
  CVector u = a.col(start);
  u.normalize();
  double s = 0.0;
  for (int it = 0; it < kMaxIters; ++it) {
    CVector next = a * (a.adjoint() * u);
    const double lambda = next.norm();
    if (lambda == 0.0) break;
    next /= lambda;
    // compare up to phase
    const double change = std::sqrt(std::max(0.0, 2.0 - 2.0 * std::abs(u.dot(next))));
    u = std::move(next);
    s = std::sqrt(lambda);
    if (change < kTol) break;
  }
  return {u, s};
}

}  // namespace

SingularPair leading_singular_pair(const CMatrix& a) {
  if (a.size() == 0 || a.cwiseAbs().maxCoeff() == 0.0) {
    throw DegenerateInput("leading_singular_pair: zero matrix");
  }
  SingularPair pair;
  if (a.rows() <= kDenseSvdMaxRows) {
    Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeThinU);
    pair.u = svd.matrixU().col(0);
    pair.s = svd.singularValues()[0];
  } else {
    pair = power_iteration(a);
  }
  normalize_phase(pair.u);
  return pair;
}

}  // namespace kronsbl
