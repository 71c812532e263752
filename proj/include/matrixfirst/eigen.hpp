#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "matrixfirst/echelon.hpp"
#include "matrixfirst/error.hpp"
#include "matrixfirst/matrix.hpp"
#include "matrixfirst/polynomial.hpp"

namespace matrixfirst {

// ---------------------------------------------------------------------------
// Krylov vector iteration and the minimal polynomial (exact)
// ---------------------------------------------------------------------------

struct KrylovResult {
  std::vector<RationalVector> iterates;  // b, Ab, ..., A^d b
  RationalVector dependency;             // c_0..c_d, c_d = 1, sum c_i A^i b = 0
  Polynomial annihilator;                // monic, degree d
};

/// One iterate at a time. After each append the iterate matrix is reduced
/// again; the first free column ends the iteration.
class KrylovIteration {
 public:
  KrylovIteration(RationalMatrix a, RationalVector b);

  /// Appends A times the last iterate. Returns true once a dependency exists.
  /// Throws InvalidArgument when called after completion.
  bool append();

  bool done() const noexcept { return result_.has_value(); }
  const std::vector<RationalVector>& iterates() const noexcept { return iterates_; }
  const std::optional<KrylovResult>& result() const noexcept { return result_; }
  const RationalMatrix& matrix() const noexcept { return a_; }

  /// The iterates as columns.
  RationalMatrix iterate_matrix() const { return RationalMatrix::from_columns(iterates_); }

 private:
  RationalMatrix a_;
  std::vector<RationalVector> iterates_;
  std::optional<KrylovResult> result_;
};

/// Throws InvalidArgument for b = 0.
KrylovResult krylov_annihilator(const RationalMatrix& a, const RationalVector& b);

/// lcm of the annihilators of e_1, ..., e_n, stopping once the degree
/// reaches n.
Polynomial minimal_polynomial(const RationalMatrix& a);

/// p(A) = 0 and I, A, ..., A^(deg p - 1) are linearly independent, so no
/// polynomial of lower degree annihilates A.
bool certify_minimal_polynomial(const Polynomial& p, const RationalMatrix& a);

// ---------------------------------------------------------------------------
// Hessenberg reduction and shifted QR iteration (float)
// ---------------------------------------------------------------------------

struct HessenbergResult {
  RealMatrix h;
  RealMatrix q;  // H = Qᵀ A Q
};

HessenbergResult hessenberg(const RealMatrix& a);

inline constexpr double kDeflationTolerance = 1e-13;
inline constexpr double kEigenvectorResidualLimit = 1e-8;

struct EigenvalueGroup {
  ComplexF value;
  std::size_t multiplicity = 0;
};

struct EigenPair {
  double value = 0.0;
  RealVector vector;  // unit length
  double residual = 0.0;  // ‖Av − λv‖ / ‖A‖_max
};

struct EigenResult {
  std::vector<ComplexF> eigenvalues;     // n values, repeated by multiplicity
  std::vector<EigenvalueGroup> distinct;
  std::optional<std::vector<EigenPair>> eigenvectors;  // real eigenvalues only
  std::size_t iterations_used = 0;
  RealMatrix schur;  // quasi upper triangular T
  RealMatrix z;      // T = Zᵀ A Z
};

/// Carries the eigenvalues deflated so far and the working matrix.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(std::size_t iterations, std::vector<ComplexF> deflated, RealMatrix partial);
  std::size_t iterations() const noexcept { return iterations_; }
  const std::vector<ComplexF>& deflated() const noexcept { return deflated_; }
  const RealMatrix& partial() const noexcept { return partial_; }

 private:
  std::size_t iterations_;
  std::vector<ComplexF> deflated_;
  RealMatrix partial_;
};

struct FrancisOptions {
  std::optional<std::size_t> max_sweeps;  // default 30 n
  bool compute_eigenvectors = true;
};

/// Hessenberg reduction, then Wilkinson-shifted sweeps. When the trailing 2x2
/// block has a complex pair an implicit double-shift sweep is used instead.
/// Output order: descending |λ|, then descending real part, then descending
/// imaginary part.
EigenResult francis_qr_eigenvalues(const RealMatrix& a, const FrancisOptions& opts = {});

/// Exact eigenspace basis of A − λI. Throws EmptyEigenspace.
std::vector<RationalVector> eigenvectors_for(const RationalMatrix& a, const Rational& lambda);

/// Null space of A − λI at the float pivot threshold, normalized, each with
/// ‖Av − λv‖ ≤ 1e-8 ‖A‖_max. Throws EmptyEigenspace.
std::vector<RealVector> eigenvectors_for(const RealMatrix& a, double lambda,
                                         const EchelonOptions& opts = {PivotStrategy::PartialPivot, std::nullopt, false});

// ---------------------------------------------------------------------------
// Cost of the determinant expansion
// ---------------------------------------------------------------------------

struct CharpolyCost {
  std::uint64_t permutation_terms = 0;
  std::chrono::duration<double> wallclock{};  // mean time per evaluation
};

/// Times the permutation expansion of a random n x n rational matrix.
/// Throws DimensionTooLarge for n > 8.
CharpolyCost charpoly_cost_demo(std::size_t n, std::uint64_t seed = 1);

}  // namespace matrixfirst
