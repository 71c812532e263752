#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "matrixfirst/echelon.hpp"
#include "matrixfirst/matrix.hpp"

namespace matrixfirst {

// ---------------------------------------------------------------------------
// LR (LU) factorization and determinants
// ---------------------------------------------------------------------------

enum class LuPivoting { None, FirstNonzero, Partial };

/// P A = L R, with row i of P A equal to row perm[i] of A.
template <Scalar T>
struct LuFactors {
  Matrix<T> l;
  Matrix<T> r;
  std::vector<std::size_t> perm;
  std::size_t exchange_count = 0;
  StepTrace<T> trace;  // ops applied to A on the way to R
};

/// Default pivoting is FirstNonzero for rationals and Partial for doubles.
/// With LuPivoting::None a zero pivot above a nonzero entry throws
/// ZeroPivotError.
template <Scalar T>
LuFactors<T> lu(const Matrix<T>& a, std::optional<LuPivoting> pivoting = std::nullopt);

template <Scalar T>
Matrix<T> permutation_matrix(const std::vector<std::size_t>& perm);

/// (-1)^ex * prod r_ii from the LR factorization.
template <Scalar T>
T det_via_lu(const Matrix<T>& a);

inline constexpr std::size_t kMaxPermutationExpansionDim = 8;

template <Scalar T>
struct PermutationExpansion {
  T value{};
  std::uint64_t terms = 0;
};

/// Sum over all n! permutations of signed products. Refuses n > 8.
template <Scalar T>
PermutationExpansion<T> permutation_expansion(const Matrix<T>& a);

template <Scalar T>
T det_permutation_oracle(const Matrix<T>& a) {
  return permutation_expansion(a).value;
}

// ---------------------------------------------------------------------------
// Orthogonal factorizations
// ---------------------------------------------------------------------------

/// H = I - beta v v^T acting on rows/entries [offset, m). v[0] == 1 unless
/// beta == 0, in which case H is the identity.
struct HouseholderReflector {
  std::size_t offset = 0;
  RealVector v;
  double beta = 0.0;
};

/// Reflector mapping x to (alpha, 0, ..., 0) with alpha = -sign(x0)‖x‖.
/// When the tail of x is already zero the identity (beta = 0) is returned.
HouseholderReflector make_reflector(std::span<const double> x, std::size_t offset);

struct QrFactors {
  RealMatrix q;  // m x m orthogonal
  RealMatrix r;  // m x n upper triangular
  std::vector<HouseholderReflector> reflectors;
};

QrFactors householder_qr(const RealMatrix& a);

/// Identity except (i,i) = (j,j) = cos θ, (i,j) = -sin θ, (j,i) = sin θ.
RealMatrix givens(std::size_t n, std::size_t i, std::size_t j, double theta);

struct GramSchmidtFactors {
  RealMatrix q;  // m x n
  RealMatrix r;  // n x n
};

/// The classical (not modified) recurrence: every projection coefficient uses
/// the original column.
GramSchmidtFactors classical_gram_schmidt(const RealMatrix& a);

struct LeastSquaresResult {
  RealVector x;
  double residual_norm = 0.0;
};

/// |r_ii| <= kRankDeficiencyTolerance * ‖A‖_max flags rank deficiency.
inline constexpr double kRankDeficiencyTolerance = 1e-10;

LeastSquaresResult least_squares(const RealMatrix& a, const RealVector& b);

struct GramSchmidtComparison {
  double classical_deviation = 0.0;   // ‖QᵀQ − I‖_max
  double householder_deviation = 0.0;
  double ratio = 0.0;                 // classical / householder
};

/// Runs both orthogonalizations on the same matrix. Throws RankDeficient when
/// the columns are dependent.
GramSchmidtComparison gs_compare(const RealMatrix& a);

/// Entries 1 / (i + j + 1).
RealMatrix hilbert_matrix(std::size_t n);

}  // namespace matrixfirst
