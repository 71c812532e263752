#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace matrixfirst {

enum class ErrorCode {
  InvalidArgument,
  Parse,
  ShapeMismatch,
  DomainMismatch,
  DivisionByZero,
  SingularMatrix,
  ZeroPivot,
  DimensionTooLarge,
  RankDeficient,
  NoConvergence,
  EmptyEigenspace,
  NotDiagonal,
  NotInSpan,
  ZeroColumn,
  IllegalRowOp,
  UnknownSession,
  GoalReached,
};

std::string_view to_string(ErrorCode code);

/// Base for every error raised by the library. The code drives CLI exit
/// statuses and HTTP status mapping.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class SingularMatrixError : public Error {
 public:
  SingularMatrixError(std::size_t rank, std::vector<std::size_t> free_cols);

  std::size_t rank() const noexcept { return rank_; }
  const std::vector<std::size_t>& free_cols() const noexcept { return free_cols_; }

 private:
  std::size_t rank_;
  std::vector<std::size_t> free_cols_;
};

class ZeroPivotError : public Error {
 public:
  ZeroPivotError(std::size_t row, std::size_t col);

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class NotDiagonalError : public Error {
 public:
  explicit NotDiagonalError(double off_diagonal_residual);

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace matrixfirst
