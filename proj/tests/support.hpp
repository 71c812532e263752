// Shared generators and independent oracles for the test suites. Nothing here
// calls into the code paths it is used to check.
#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "matrixfirst/matrix.hpp"
#include "matrixfirst/polynomial.hpp"

namespace mftest {

using namespace matrixfirst;

inline RationalMatrix random_int_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                                        long lo = -5, long hi = 5) {
  std::uniform_int_distribution<long> d(lo, hi);
  RationalMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = Rational(d(rng));
  return m;
}

/// Entries p/q with |p| <= 5 and 1 <= q <= 4.
inline RationalMatrix random_rational_matrix(std::mt19937_64& rng, std::size_t rows,
                                             std::size_t cols) {
  std::uniform_int_distribution<long> num(-5, 5);
  std::uniform_int_distribution<long> den(1, 4);
  RationalMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = Rational(num(rng), den(rng));
  return m;
}

/// Rank-deficient matrices show up often enough to exercise free columns.
inline RationalMatrix random_mixed_rank_matrix(std::mt19937_64& rng, std::size_t rows,
                                               std::size_t cols) {
  RationalMatrix m = random_rational_matrix(rng, rows, cols);
  std::uniform_int_distribution<int> mode(0, 3);
  std::uniform_int_distribution<std::size_t> pick_col(0, cols - 1);
  std::uniform_int_distribution<std::size_t> pick_row(0, rows - 1);
  switch (mode(rng)) {
    case 0: {  // duplicate a column combination
      if (cols >= 2) {
        const std::size_t a = pick_col(rng), b = pick_col(rng);
        for (std::size_t i = 0; i < rows; ++i) m(i, b) = m(i, a) * Rational(2);
      }
      break;
    }
    case 1: {  // zero column
      const std::size_t c = pick_col(rng);
      for (std::size_t i = 0; i < rows; ++i) m(i, c) = Rational(0);
      break;
    }
    case 2: {  // dependent row
      if (rows >= 2) {
        const std::size_t a = pick_row(rng), b = pick_row(rng);
        for (std::size_t j = 0; j < cols; ++j) m(b, j) = m(a, j) * Rational(-3);
      }
      break;
    }
    default:
      break;
  }
  return m;
}

inline RealMatrix random_real_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> d(0.0, 1.0);
  RealMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = d(rng);
  return m;
}

/// Unit lower times unit upper with random integer off-diagonals: always
/// invertible, determinant 1, then row-permuted.
inline RationalMatrix random_unimodular(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<long> d(-2, 2);
  RationalMatrix l = RationalMatrix::identity(n), u = RationalMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      l(i, j) = Rational(d(rng));
      u(j, i) = Rational(d(rng));
    }
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) m(i, j) += l(i, k) * u(k, j);
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  RationalMatrix p(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p(i, j) = m(perm[i], j);
  return p;
}

/// Triple-loop product, independent of Matrix::operator*.
template <class T>
Matrix<T> naive_product(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      T s(0);
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

/// sum c_i A^i by explicit powers, independent of the Horner path.
inline RationalMatrix power_sum(const Polynomial& p, const RationalMatrix& a) {
  const std::size_t n = a.rows();
  RationalMatrix acc(n, n);
  RationalMatrix power = RationalMatrix::identity(n);
  for (int k = 0; k <= p.degree(); ++k) {
    const Rational c = p.coefficient(k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) acc(i, j) += c * power(i, j);
    power = naive_product(power, a);
  }
  return acc;
}

inline Polynomial random_poly(std::mt19937_64& rng, int max_degree) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_int_distribution<long> num(-6, 6);
  std::uniform_int_distribution<long> den(1, 3);
  std::vector<Rational> c(static_cast<std::size_t>(deg(rng)) + 1);
  for (auto& x : c) x = Rational(num(rng), den(rng));
  return Polynomial(c);
}

inline Polynomial poly(std::initializer_list<long> low_first) {
  std::vector<Rational> c;
  for (long v : low_first) c.emplace_back(v);
  return Polynomial(c);
}

/// Laplace expansion along the first row.
inline Rational cofactor_det(const RationalMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 1) return a(0, 0);
  Rational acc(0);
  for (std::size_t j = 0; j < n; ++j) {
    if (a(0, j).is_zero()) continue;
    RationalMatrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t k = 0, c = 0; k < n; ++k)
        if (k != j) minor(i - 1, c++) = a(i, k);
    const Rational term = a(0, j) * cofactor_det(minor);
    acc += (j % 2 == 0) ? term : -term;
  }
  return acc;
}

inline RationalVector rvec(std::initializer_list<long> xs) {
  RationalVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

}  // namespace mftest
