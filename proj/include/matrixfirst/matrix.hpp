#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "matrixfirst/error.hpp"
#include "matrixfirst/rational.hpp"

namespace matrixfirst {

/// The two scalar domains. Mixing them in one operation is an error; the
/// only conversion offered is the lossy Rational -> double direction.
template <class T>
concept Scalar = std::same_as<T, Rational> || std::same_as<T, double>;

template <Scalar T>
constexpr bool is_exact_v = std::same_as<T, Rational>;

inline double magnitude(const Rational& r) { return abs(r).to_double(); }
inline double magnitude(double x) { return std::abs(x); }
inline double to_double(const Rational& r) { return r.to_double(); }
inline double to_double(double x) { return x; }
inline std::string scalar_text(const Rational& r) { return r.str(); }
std::string scalar_text(double x);

template <Scalar T>
using Vector = std::vector<T>;

/// Dense row-major matrix with at least one row and one column.
template <Scalar T>
class Matrix {
 public:
  using value_type = T;

  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {
    check_shape();
  }

  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    check_shape();
    if (data_.size() != rows_ * cols_) {
      throw Error(ErrorCode::ShapeMismatch, "entry count " + std::to_string(data_.size()) +
                                                " does not match " + std::to_string(rows_) + "x" +
                                                std::to_string(cols_));
    }
    if constexpr (!is_exact_v<T>) {
      for (double x : data_) {
        if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "non-finite matrix entry");
      }
    }
  }

  Matrix(std::initializer_list<std::initializer_list<T>> rows)
      : Matrix(from_rows(std::vector<std::vector<T>>(rows.begin(), rows.end()))) {}

  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    if (rows.empty() || rows.front().empty()) {
      throw Error(ErrorCode::ShapeMismatch, "matrix needs at least one row and one column");
    }
    std::vector<T> data;
    data.reserve(rows.size() * rows.front().size());
    for (const auto& row : rows) {
      if (row.size() != rows.front().size()) {
        throw Error(ErrorCode::ShapeMismatch, "ragged rows in matrix literal");
      }
      data.insert(data.end(), row.begin(), row.end());
    }
    return Matrix(rows.size(), rows.front().size(), std::move(data));
  }

  /// Column-vector matrix: column j is vectors[j].
  static Matrix from_columns(const std::vector<Vector<T>>& columns) {
    if (columns.empty() || columns.front().empty()) {
      throw Error(ErrorCode::ShapeMismatch, "need at least one nonempty vector");
    }
    const std::size_t n = columns.front().size();
    Matrix m(n, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != n) {
        throw Error(ErrorCode::ShapeMismatch, "vectors of unequal length");
      }
      for (std::size_t i = 0; i < n; ++i) m(i, j) = columns[j][i];
    }
    return m;
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  Vector<T> column(std::size_t c) const {
    Vector<T> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
    return v;
  }

  std::vector<Vector<T>> columns() const {
    std::vector<Vector<T>> out;
    out.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }

  const std::vector<T>& data() const noexcept { return data_; }

  /// Rows [r0, r0+nr) and columns [c0, c0+nc).
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) {
      throw Error(ErrorCode::ShapeMismatch, "block out of range");
    }
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Largest entry magnitude, ‖A‖_max.
  double max_abs() const {
    double m = 0.0;
    for (const T& x : data_) m = std::max(m, magnitude(x));
    return m;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const T& x) { return x == T(0); });
  }

  Matrix& operator+=(const Matrix& rhs) {
    require_same_shape(rhs, "add");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
  }

  Matrix& operator-=(const Matrix& rhs) {
    require_same_shape(rhs, "subtract");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
  }

  Matrix& operator*=(const T& factor) {
    for (T& x : data_) x *= factor;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
  friend Matrix operator*(const T& s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) {
      throw Error(ErrorCode::ShapeMismatch, "cannot multiply " + a.shape_text() + " by " +
                                                b.shape_text());
    }
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == T(0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    }
    return c;
  }

  friend Vector<T> operator*(const Matrix& a, const Vector<T>& x) {
    if (a.cols_ != x.size()) {
      throw Error(ErrorCode::ShapeMismatch, "vector length " + std::to_string(x.size()) +
                                                " does not match " + a.shape_text());
    }
    Vector<T> y(a.rows_, T(0));
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) y[i] += a(i, j) * x[j];
    return y;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string shape_text() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  void check_shape() const {
    if (rows_ == 0 || cols_ == 0) {
      throw Error(ErrorCode::ShapeMismatch, "matrix needs at least one row and one column");
    }
  }

  void require_same_shape(const Matrix& rhs, const char* what) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
      throw Error(ErrorCode::ShapeMismatch, std::string("cannot ") + what + " " + shape_text() +
                                                " and " + rhs.shape_text());
    }
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<T> data_;
};

using RationalMatrix = Matrix<Rational>;
using RealMatrix = Matrix<double>;
using RationalVector = Vector<Rational>;
using RealVector = Vector<double>;

RealMatrix to_real(const RationalMatrix& m);
RealVector to_real(const RationalVector& v);

template <Scalar T>
Vector<T> unit_vector(std::size_t n, std::size_t i) {
  Vector<T> e(n, T(0));
  e.at(i) = T(1);
  return e;
}

template <Scalar T>
bool is_zero_vector(const Vector<T>& v) {
  return std::all_of(v.begin(), v.end(), [](const T& x) { return x == T(0); });
}

/// Max-entry distance between two equally shaped float matrices.
double max_abs_diff(const RealMatrix& a, const RealMatrix& b);

/// Runtime-tagged matrix for the text/JSON boundary, where the domain is
/// only known after parsing.
using AnyMatrix = std::variant<RationalMatrix, RealMatrix>;

enum class ArithKind { Add, Sub, Mul, Scale, Transpose };

/// Domain-checked arithmetic on tagged matrices. `rhs` is ignored for
/// Transpose; for Scale it must be 1x1 and supplies the factor.
AnyMatrix mat_arith(const AnyMatrix& lhs, const AnyMatrix& rhs, ArithKind kind);

}  // namespace matrixfirst
