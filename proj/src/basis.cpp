#include "matrixfirst/basis.hpp"

namespace matrixfirst {

template <Scalar T>
InverseResult<T> invert_traced(const Matrix<T>& a, const EchelonOptions& opts) {
  if (!a.is_square()) throw Error(ErrorCode::ShapeMismatch, "cannot invert a " + a.shape_text() + " matrix");
  const std::size_t n = a.rows();
  Matrix<T> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = T(1);
  }
  // The identity block leaves max(1, ‖A‖_max), and so the float threshold,
  // unchanged.
  RefResult<T> red = rref(aug, opts);

  std::vector<std::size_t> free_in_a;
  std::size_t rank_a = 0;
  std::vector<bool> pivot_col(n, false);
  for (const auto& p : red.pivots) {
    if (p.col < n) {
      pivot_col[p.col] = true;
      ++rank_a;
    }
  }
  if (rank_a < n) {
    for (std::size_t c = 0; c < n; ++c)
      if (!pivot_col[c]) free_in_a.push_back(c);
    throw SingularMatrixError(rank_a, std::move(free_in_a));
  }
  return {red.rref->block(0, n, n, n), std::move(red.trace)};
}

template <Scalar T>
BasisSet<T>::BasisSet(std::vector<Vector<T>> vectors, const EchelonOptions& opts)
    : vectors_(std::move(vectors)), u_(Matrix<T>::from_columns(vectors_)) {
  if (!u_.is_square()) {
    throw Error(ErrorCode::InvalidArgument, "a basis of n-space needs exactly n vectors of length n");
  }
  if (rank(u_, opts) != u_.rows()) {
    throw Error(ErrorCode::InvalidArgument, "basis vectors are linearly dependent");
  }
}

template <Scalar T>
Vector<T> coordinates_in_basis(const Vector<T>& v, const BasisSet<T>& basis) {
  if (v.size() != basis.dim()) throw Error(ErrorCode::ShapeMismatch, "vector and basis dimensions differ");
  const auto sol = solve(basis.as_matrix(), v, default_echelon_options<T>());
  return std::get<UniqueSolution<T>>(sol).x;
}

template <Scalar T>
Matrix<T> change_of_basis(const Matrix<T>& a_e, const BasisSet<T>& basis) {
  if (!a_e.is_square() || a_e.rows() != basis.dim()) {
    throw Error(ErrorCode::ShapeMismatch, "matrix " + a_e.shape_text() + " does not match basis dimension " +
                                              std::to_string(basis.dim()));
  }
  const Matrix<T>& u = basis.as_matrix();
  return invert(u) * a_e * u;
}

template <Scalar T>
Matrix<T> eigenbasis_representation(const Matrix<T>& a, const BasisSet<T>& eigvecs) {
  Matrix<T> rep = change_of_basis(a, eigvecs);
  double off = 0.0;
  for (std::size_t i = 0; i < rep.rows(); ++i)
    for (std::size_t j = 0; j < rep.cols(); ++j)
      if (i != j) off = std::max(off, magnitude(rep(i, j)));
  if constexpr (is_exact_v<T>) {
    if (off > 0.0) throw NotDiagonalError(off);
  } else {
    if (off > kEigenbasisTolerance * a.max_abs()) throw NotDiagonalError(off);
  }
  return rep;
}

#define MATRIXFIRST_INSTANTIATE(T)                                                     \
  template InverseResult<T> invert_traced<T>(const Matrix<T>&, const EchelonOptions&); \
  template class BasisSet<T>;                                                          \
  template Vector<T> coordinates_in_basis<T>(const Vector<T>&, const BasisSet<T>&);    \
  template Matrix<T> change_of_basis<T>(const Matrix<T>&, const BasisSet<T>&);         \
  template Matrix<T> eigenbasis_representation<T>(const Matrix<T>&, const BasisSet<T>&);

MATRIXFIRST_INSTANTIATE(Rational)
MATRIXFIRST_INSTANTIATE(double)

#undef MATRIXFIRST_INSTANTIATE

}  // namespace matrixfirst
