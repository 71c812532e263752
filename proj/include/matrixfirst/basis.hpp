#pragma once

#include <vector>

#include "matrixfirst/echelon.hpp"
#include "matrixfirst/matrix.hpp"

namespace matrixfirst {

/// Partial pivoting in the float domain, first nonzero in the exact domain.
template <Scalar T>
EchelonOptions default_echelon_options() {
  EchelonOptions o;
  o.strategy = is_exact_v<T> ? PivotStrategy::FirstNonzero : PivotStrategy::PartialPivot;
  return o;
}

template <Scalar T>
struct InverseResult {
  Matrix<T> inverse;
  StepTrace<T> trace;  // Gauss-Jordan on [A | I]
};

/// Gauss-Jordan on the augmented block [A | I]. Throws SingularMatrixError
/// carrying the rank and free columns of A.
template <Scalar T>
InverseResult<T> invert_traced(const Matrix<T>& a, const EchelonOptions& opts = default_echelon_options<T>());

template <Scalar T>
Matrix<T> invert(const Matrix<T>& a, const EchelonOptions& opts = default_echelon_options<T>()) {
  auto o = opts;
  o.record_trace = false;
  return invert_traced(a, o).inverse;
}

/// n independent vectors of length n, kept together with the matrix U that
/// has them as columns.
template <Scalar T>
class BasisSet {
 public:
  explicit BasisSet(std::vector<Vector<T>> vectors, const EchelonOptions& opts = default_echelon_options<T>());

  static BasisSet from_matrix(const Matrix<T>& u) { return BasisSet(u.columns()); }
  static BasisSet standard(std::size_t n) { return from_matrix(Matrix<T>::identity(n)); }

  const std::vector<Vector<T>>& vectors() const noexcept { return vectors_; }
  const Matrix<T>& as_matrix() const noexcept { return u_; }
  std::size_t dim() const noexcept { return vectors_.size(); }

 private:
  std::vector<Vector<T>> vectors_;
  Matrix<T> u_;
};

/// c with U c = v.
template <Scalar T>
Vector<T> coordinates_in_basis(const Vector<T>& v, const BasisSet<T>& basis);

/// A_U = U^-1 A_E U.
template <Scalar T>
Matrix<T> change_of_basis(const Matrix<T>& a_e, const BasisSet<T>& basis);

/// Off-diagonal tolerance for float eigenbases: 1e-9 * ‖A‖_max.
inline constexpr double kEigenbasisTolerance = 1e-9;

/// change_of_basis with a diagonality check. Throws NotDiagonalError when the
/// representation has off-diagonal mass (exactly, or above tolerance).
template <Scalar T>
Matrix<T> eigenbasis_representation(const Matrix<T>& a, const BasisSet<T>& eigvecs);

}  // namespace matrixfirst
