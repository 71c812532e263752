#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "matrixfirst/matrix.hpp"

namespace matrixfirst {

// ---------------------------------------------------------------------------
// Elementary row operations and their trace
// ---------------------------------------------------------------------------

struct SwapRows {
  std::size_t i = 0;
  std::size_t j = 0;
  friend bool operator==(const SwapRows&, const SwapRows&) = default;
};

template <Scalar T>
struct ScaleRow {
  std::size_t row = 0;
  T factor{};
  friend bool operator==(const ScaleRow&, const ScaleRow&) = default;
};

/// row[dst] += factor * row[src]
template <Scalar T>
struct AddMultiple {
  std::size_t src = 0;
  T factor{};
  std::size_t dst = 0;
  friend bool operator==(const AddMultiple&, const AddMultiple&) = default;
};

template <Scalar T>
using RowOp = std::variant<SwapRows, ScaleRow<T>, AddMultiple<T>>;

/// Reason the op is illegal on a matrix with `rows` rows, or empty if legal.
/// Swapping a row with itself, scaling by zero and adding a row to itself
/// are all illegal.
template <Scalar T>
std::optional<std::string> row_op_violation(const RowOp<T>& op, std::size_t rows);

/// Applies a legal op in place; throws IllegalRowOp otherwise.
template <Scalar T>
void apply_row_op(Matrix<T>& m, const RowOp<T>& op);

template <Scalar T>
std::string describe(const RowOp<T>& op);

/// Factor by which the op multiplies a determinant: -1, alpha or 1.
template <Scalar T>
T det_effect(const RowOp<T>& op);

template <Scalar T>
struct TraceStep {
  RowOp<T> op;
  std::string annotation;
  Matrix<T> after;
};

template <Scalar T>
struct StepTrace {
  std::vector<TraceStep<T>> steps;

  std::size_t size() const noexcept { return steps.size(); }
  bool empty() const noexcept { return steps.empty(); }
};

struct ReplayCheck {
  bool ok = true;
  std::optional<std::size_t> first_mismatch;  // index of first bad snapshot
};

/// Re-applies every op from `initial` and compares each snapshot exactly.
template <Scalar T>
ReplayCheck verify_replay(const Matrix<T>& initial, const StepTrace<T>& trace);

// ---------------------------------------------------------------------------
// Row echelon forms
// ---------------------------------------------------------------------------

enum class PivotStrategy { FirstNonzero, PartialPivot };

/// Default relative pivot threshold for the float domain: an entry with
/// |x| <= tol * max(1, ‖A‖_max) counts as zero.
inline constexpr double kDefaultPivotTolerance = 1e-11;

struct EchelonOptions {
  PivotStrategy strategy = PivotStrategy::FirstNonzero;
  /// Replaces kDefaultPivotTolerance. Ignored in the exact domain.
  std::optional<double> tol;
  bool record_trace = true;
};

struct Pivot {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const Pivot&, const Pivot&) = default;
};

template <Scalar T>
struct RefResult {
  Matrix<T> ref;
  std::optional<Matrix<T>> rref;
  std::vector<Pivot> pivots;
  std::vector<std::size_t> free_cols;
  std::size_t rank = 0;
  StepTrace<T> trace;
  std::size_t exchange_count = 0;
};

/// Absolute zero threshold used for `a` in the float domain (0 when exact).
template <Scalar T>
double zero_threshold(const Matrix<T>& a, const std::optional<double>& tol);

/// Row echelon form without column exchanges.
template <Scalar T>
RefResult<T> ref(const Matrix<T>& a, const EchelonOptions& opts = {});

/// Reduced row echelon form; `ref` and pivot data are those of ref(a, opts).
template <Scalar T>
RefResult<T> rref(const Matrix<T>& a, const EchelonOptions& opts = {});

template <Scalar T>
bool is_ref(const Matrix<T>& a, double threshold = 0.0);

template <Scalar T>
bool is_rref(const Matrix<T>& a, double threshold = 0.0);

template <Scalar T>
std::size_t rank(const Matrix<T>& a, const EchelonOptions& opts = {});

// ---------------------------------------------------------------------------
// Linear systems and (in)dependence questions
// ---------------------------------------------------------------------------

template <Scalar T>
struct UniqueSolution {
  Vector<T> x;
};

template <Scalar T>
struct ParametricSolution {
  Vector<T> particular;               // free variables set to 0
  std::vector<Vector<T>> nullspace;   // one vector per free column
};

struct InconsistentSystem {
  std::size_t witness_row = 0;  // REF row whose pivot lands in the b column
};

template <Scalar T>
using Solution = std::variant<UniqueSolution<T>, ParametricSolution<T>, InconsistentSystem>;

template <Scalar T>
Solution<T> solve(const Matrix<T>& a, const Vector<T>& b, const EchelonOptions& opts = {});

/// One vector per free column, with a 1 in that column's position.
template <Scalar T>
std::vector<Vector<T>> nullspace_basis(const Matrix<T>& a, const EchelonOptions& opts = {});

/// z_index = sum_i coefficients[i] * z_i over the preceding vectors.
template <Scalar T>
struct Dependency {
  std::size_t index = 0;
  Vector<T> coefficients;
};

template <Scalar T>
struct IndependenceResult {
  bool independent = true;
  std::size_t rank = 0;
  std::optional<Dependency<T>> dependency;
};

template <Scalar T>
IndependenceResult<T> is_independent(const std::vector<Vector<T>>& vectors,
                                     const EchelonOptions& opts = {});

template <Scalar T>
struct SpanMembership {
  bool member = false;
  std::optional<Vector<T>> coefficients;
};

template <Scalar T>
SpanMembership<T> in_span(const Vector<T>& v, const std::vector<Vector<T>>& spanning,
                          const EchelonOptions& opts = {});

template <Scalar T>
bool span_equals(const std::vector<Vector<T>>& u, const std::vector<Vector<T>>& w,
                 const EchelonOptions& opts = {});

/// Rank of the column-vector matrix; 0 for an empty list.
template <Scalar T>
std::size_t span_dimension(const std::vector<Vector<T>>& vectors, const EchelonOptions& opts = {});

template <Scalar T>
struct SizeBoundResult {
  bool forced_dependent = false;
  std::size_t spanning_count = 0;  // ℓ
  std::size_t set_size = 0;        // m
  std::size_t dimension = 0;       // k = dim span
  std::optional<Dependency<T>> dependency;
  std::string certificate;
};

/// Every vector of `s` must lie in span(spanning); throws NotInSpan otherwise.
template <Scalar T>
SizeBoundResult<T> independence_size_bound(const std::vector<Vector<T>>& spanning,
                                           const std::vector<Vector<T>>& s,
                                           const EchelonOptions& opts = {});

enum class BasisReason { IndependentHenceSpanning, SpanningHenceIndependent, Fails };

std::string_view to_string(BasisReason reason);

struct BasisCheck {
  bool is_basis = false;
  BasisReason reason = BasisReason::Fails;
  std::size_t rank = 0;
  std::size_t count = 0;
  std::size_t expected_dim = 0;
  /// rank == count == expected_dim
  bool duality_holds = false;
  std::string note;
};

/// Without `subspace` the independence direction is used: k independent
/// vectors span the k-dimensional space they live in. With a spanning set for
/// the subspace, spanning is established first and independence follows.
template <Scalar T>
BasisCheck basis_check(const std::vector<Vector<T>>& vectors, std::size_t expected_dim,
                       const std::optional<std::vector<Vector<T>>>& subspace = std::nullopt,
                       const EchelonOptions& opts = {});

}  // namespace matrixfirst
