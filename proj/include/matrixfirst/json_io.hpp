#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "matrixfirst/echelon.hpp"
#include "matrixfirst/eigen.hpp"
#include "matrixfirst/factor.hpp"
#include "matrixfirst/matrix.hpp"
#include "matrixfirst/polynomial.hpp"
#include "matrixfirst/rational.hpp"

namespace matrixfirst {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Matrix ingestion
// ---------------------------------------------------------------------------

/// CSV rows of entries. Blank lines and lines starting with '#' are skipped.
/// Exact mode accepts rational tokens only; float mode accepts decimals too.
AnyMatrix parse_matrix_csv(std::string_view text, bool as_float);

/// {"rows": r, "cols": c, "data": [[...]]} with string or number entries;
/// a bare array of rows is accepted as well. In exact mode a non-integer
/// number is a Parse error.
AnyMatrix matrix_from_json(const Json& j, bool as_float);

/// JSON when the first non-blank character is '{' or '[', CSV otherwise.
AnyMatrix parse_matrix_text(std::string_view text, bool as_float);

Rational rational_from_json(const Json& j);
double real_from_json(const Json& j);

template <Scalar T>
T scalar_from_json(const Json& j) {
  if constexpr (is_exact_v<T>) {
    return rational_from_json(j);
  } else {
    return real_from_json(j);
  }
}

template <Scalar T>
Vector<T> vector_from_json(const Json& j);

template <Scalar T>
Matrix<T> matrix_from_json_as(const Json& j);

// ---------------------------------------------------------------------------
// Emission (and the matching parsers for round trips)
// ---------------------------------------------------------------------------

/// Rationals become "p/q" strings, doubles stay numbers.
Json to_json(const Rational& x);
Json to_json(double x);

template <Scalar T>
Json to_json(const Vector<T>& v);

/// {"rows", "cols", "data"}
template <Scalar T>
Json to_json(const Matrix<T>& m);

Json to_json(const AnyMatrix& m);

/// Bare list of rows, as used for trace snapshots.
template <Scalar T>
Json rows_json(const Matrix<T>& m);

template <Scalar T>
Json to_json(const RowOp<T>& op);

template <Scalar T>
RowOp<T> row_op_from_json(const Json& j);

template <Scalar T>
Json to_json(const StepTrace<T>& trace);

template <Scalar T>
StepTrace<T> step_trace_from_json(const Json& j);

template <Scalar T>
Json to_json(const RefResult<T>& r, bool with_trace);

template <Scalar T>
RefResult<T> ref_result_from_json(const Json& j);

template <Scalar T>
Json to_json(const Solution<T>& s);

template <Scalar T>
Solution<T> solution_from_json(const Json& j);

/// {"L", "R", "perm", "ex"} plus "trace" on request.
template <Scalar T>
Json to_json(const LuFactors<T>& f, bool with_trace);

template <Scalar T>
LuFactors<T> lu_factors_from_json(const Json& j);

Json to_json(const QrFactors& f);
QrFactors qr_factors_from_json(const Json& j);

/// {"text": "x^2 - 5x + 6", "coefficients": ["6", "-5", "1"]} (low first).
Json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j);

Json to_json(const KrylovResult& k);
KrylovResult krylov_result_from_json(const Json& j);

/// {"eigenvalues": [{"re", "im", "mult"}], "residuals": [...],
///  "eigenvectors": [...], "iterations": k}
Json to_json(const EigenResult& r);

/// Reporting subset of EigenResult recovered from its JSON form.
struct EigenReport {
  std::vector<EigenvalueGroup> eigenvalues;
  std::vector<double> residuals;
  std::vector<EigenPair> eigenvectors;
  std::size_t iterations = 0;
  friend bool operator==(const EigenReport&, const EigenReport&);
};
EigenReport eigen_report_from_json(const Json& j);
EigenReport eigen_report(const EigenResult& r);

Json to_json(const LeastSquaresResult& r);
LeastSquaresResult least_squares_from_json(const Json& j);

Json to_json(const GramSchmidtComparison& c);
GramSchmidtComparison gs_comparison_from_json(const Json& j);

Json to_json(const BasisCheck& c);
BasisCheck basis_check_from_json(const Json& j);

}  // namespace matrixfirst
