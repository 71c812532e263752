#include "matrixfirst/error.hpp"

#include <sstream>

namespace matrixfirst {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::ZeroPivot: return "ZeroPivot";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::EmptyEigenspace: return "EmptyEigenspace";
    case ErrorCode::NotDiagonal: return "NotDiagonal";
    case ErrorCode::NotInSpan: return "NotInSpan";
    case ErrorCode::ZeroColumn: return "ZeroColumn";
    case ErrorCode::IllegalRowOp: return "IllegalRowOp";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::GoalReached: return "GoalReached";
  }
  return "Unknown";
}

namespace {

std::string singular_message(std::size_t rank, const std::vector<std::size_t>& free_cols) {
  std::ostringstream os;
  os << "matrix is singular: rank " << rank << ", free columns [";
  for (std::size_t i = 0; i < free_cols.size(); ++i) {
    os << (i ? ", " : "") << free_cols[i];
  }
  os << "]";
  return os.str();
}

}  // namespace

SingularMatrixError::SingularMatrixError(std::size_t rank, std::vector<std::size_t> free_cols)
    : Error(ErrorCode::SingularMatrix, singular_message(rank, free_cols)),
      rank_(rank),
      free_cols_(std::move(free_cols)) {}

ZeroPivotError::ZeroPivotError(std::size_t row, std::size_t col)
    : Error(ErrorCode::ZeroPivot, "zero pivot at (" + std::to_string(row) + ", " +
                                      std::to_string(col) + ") without row exchanges"),
      row_(row),
      col_(col) {}

NotDiagonalError::NotDiagonalError(double off_diagonal_residual)
    : Error(ErrorCode::NotDiagonal,
            "basis does not diagonalize the matrix: off-diagonal residual " +
                std::to_string(off_diagonal_residual)),
      residual_(off_diagonal_residual) {}

}  // namespace matrixfirst
