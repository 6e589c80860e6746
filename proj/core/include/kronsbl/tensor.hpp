#pragma once

#include <span>
#include <vector>

#include "kronsbl/types.hpp"

namespace kronsbl {

using Index = Eigen::Index;
using Shape = std::vector<Index>;

/// Dense complex multiway array.
///
/// Storage is a flat buffer in which the multi-index (m_0, ..., m_{I-1})
/// lives at k = sum_i m_i * prod_{j>i} M_j, i.e. the first dimension varies
/// slowest. This is the same ordering as the Kronecker product
/// y_0 (x) y_1 (x) ... (x) y_{I-1}, so a Kronecker vector and its tensor share
/// one buffer. An empty shape denotes a scalar (one element).
class ComplexTensor {
 public:
  ComplexTensor() = default;
  ComplexTensor(Shape shape, CVector data);

  static ComplexTensor zeros(Shape shape);

  const Shape& shape() const { return shape_; }
  Index order() const { return static_cast<Index>(shape_.size()); }
  Index size() const { return data_.size(); }
  Index dim(Index mode) const { return shape_.at(static_cast<std::size_t>(mode)); }

  const CVector& data() const { return data_; }
  CVector& data() { return data_; }

  Index flat_index(std::span<const Index> multi) const;
  Shape multi_index(Index flat) const;

  Complex operator()(std::span<const Index> multi) const { return data_[flat_index(multi)]; }
  Complex& operator()(std::span<const Index> multi) { return data_[flat_index(multi)]; }

  double norm() const { return data_.norm(); }

 private:
  Shape shape_;
  CVector data_;
};

/// Product of the dimensions; 1 for an empty shape.
Index shape_size(std::span<const Index> shape);

/// y_0 (x) y_1 (x) ... ; throws DimensionError on an empty list or empty factor.
CVector kron_vectors(std::span<const CVector> factors);
CVector kron_vectors(std::initializer_list<CVector> factors);

/// Reinterprets a Kronecker-ordered vector as a tensor of the given shape.
ComplexTensor from_kron_vector(const CVector& v, Shape shape);

/// Mode-`mode` unfolding (0-based), size M_mode x (size / M_mode).
///
/// Column ordering: the remaining indices are combined with the lowest
/// remaining dimension varying fastest, so for a rank-one tensor
/// o_i y_i the result is y_mode * ((y_{I-1} (x) ... (x) y_{mode+1}) (x)
/// (y_{mode-1} (x) ... (x) y_0))^T.
CMatrix mode_matricize(const ComplexTensor& t, Index mode);

/// Contracts `mode` against w without conjugation: sum_m w[m] T[..., m, ...].
/// Pass w.conjugate() to apply w^H.
ComplexTensor mode_vector_product(const ComplexTensor& t, const CVector& w, Index mode);

struct SingularPair {
  CVector u;     ///< unit-norm left singular vector
  double s = 0;  ///< largest singular value
};

/// Rows above this use power iteration instead of a dense SVD.
inline constexpr Index kDenseSvdMaxRows = 512;

/// Leading left singular vector and value of A, phase-normalized so that the
/// largest-magnitude entry of u is real positive. Throws DegenerateInput for a
/// zero matrix.
SingularPair leading_singular_pair(const CMatrix& a);

/// Rotates u so its largest-magnitude entry (first one on ties) is real
/// positive. Returns the unit-modulus factor that was applied.
Complex normalize_phase(CVector& u);

}  // namespace kronsbl
