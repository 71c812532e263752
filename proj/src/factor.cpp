#include "matrixfirst/factor.hpp"

#include <cfloat>
#include <numeric>

#include "matrixfirst/geometry.hpp"

namespace matrixfirst {

namespace {

template <Scalar T>
bool is_zero_scalar(const T& x, double threshold) {
  if constexpr (is_exact_v<T>) {
    return x.is_zero();
  } else {
    return std::abs(x) <= threshold;
  }
}

void require_square(std::size_t rows, std::size_t cols, const char* what) {
  if (rows != cols) {
    throw Error(ErrorCode::ShapeMismatch, std::string(what) + " needs a square matrix, got " +
                                              std::to_string(rows) + "x" + std::to_string(cols));
  }
}

}  // namespace

template <Scalar T>
LuFactors<T> lu(const Matrix<T>& a, std::optional<LuPivoting> pivoting) {
  require_square(a.rows(), a.cols(), "LR factorization");
  const LuPivoting mode =
      pivoting.value_or(is_exact_v<T> ? LuPivoting::FirstNonzero : LuPivoting::Partial);
  const std::size_t n = a.rows();
  const double thr = zero_threshold(a, std::nullopt);

  LuFactors<T> out{Matrix<T>::identity(n), a, std::vector<std::size_t>(n), 0, {}};
  std::iota(out.perm.begin(), out.perm.end(), std::size_t{0});
  Matrix<T>& u = out.r;
  Matrix<T>& l = out.l;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    if (mode == LuPivoting::FirstNonzero) {
      while (p < n && is_zero_scalar(u(p, k), thr)) ++p;
    } else if (mode == LuPivoting::Partial) {
      double best = -1.0;
      std::size_t arg = n;
      for (std::size_t i = k; i < n; ++i) {
        const double mag = magnitude(u(i, k));
        if (!is_zero_scalar(u(i, k), thr) && mag > best) {
          best = mag;
          arg = i;
        }
      }
      p = arg;
    } else if (is_zero_scalar(u(k, k), thr)) {
      for (std::size_t i = k + 1; i < n; ++i) {
        if (!is_zero_scalar(u(i, k), thr)) throw ZeroPivotError(k, k);
      }
      p = n;
    }

    if (p == n) {
      // Nothing to eliminate in this column; R gets a (numerically) zero pivot.
      if constexpr (!is_exact_v<T>) {
        for (std::size_t i = k + 1; i < n; ++i) u(i, k) = 0.0;
      }
      continue;
    }
    if (p != k) {
      apply_row_op(u, RowOp<T>{SwapRows{k, p}});
      std::swap(out.perm[k], out.perm[p]);
      for (std::size_t j = 0; j < k; ++j) std::swap(l(k, j), l(p, j));
      ++out.exchange_count;
      out.trace.steps.push_back({SwapRows{k, p}, "row interchange for pivot (" + std::to_string(k) + "," +
                                                     std::to_string(k) + ")",
                                 u});
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (u(i, k) == T(0)) continue;
      const T mult = u(i, k) / u(k, k);
      l(i, k) = mult;
      const RowOp<T> op = AddMultiple<T>{k, -mult, i};
      apply_row_op(u, op);
      u(i, k) = T(0);
      out.trace.steps.push_back({op, "eliminate below pivot (" + std::to_string(k) + "," + std::to_string(k) + ")", u});
    }
  }
  return out;
}

template <Scalar T>
Matrix<T> permutation_matrix(const std::vector<std::size_t>& perm) {
  Matrix<T> p(perm.size(), perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) p(i, perm.at(i)) = T(1);
  return p;
}

template <Scalar T>
T det_via_lu(const Matrix<T>& a) {
  const LuFactors<T> f = lu(a);
  T det = (f.exchange_count % 2 == 0) ? T(1) : T(-1);
  for (std::size_t i = 0; i < a.rows(); ++i) det *= f.r(i, i);
  return det;
}

template <Scalar T>
PermutationExpansion<T> permutation_expansion(const Matrix<T>& a) {
  require_square(a.rows(), a.cols(), "determinant");
  const std::size_t n = a.rows();
  if (n > kMaxPermutationExpansionDim) {
    throw Error(ErrorCode::DimensionTooLarge,
                "direct expansion over " + std::to_string(n) + "! permutations is refused for n > " +
                    std::to_string(kMaxPermutationExpansionDim));
  }
  // Heap's algorithm: consecutive permutations differ by one transposition,
  // so the sign alternates.
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), std::size_t{0});
  std::vector<std::size_t> counter(n, 0);
  PermutationExpansion<T> out{T(0), 0};
  int sign = 1;
  auto add_term = [&] {
    T prod(sign);
    for (std::size_t i = 0; i < n; ++i) prod *= a(i, sigma[i]);
    out.value += prod;
    ++out.terms;
  };
  add_term();
  std::size_t i = 1;
  while (i < n) {
    if (counter[i] < i) {
      if (i % 2 == 0) {
        std::swap(sigma[0], sigma[i]);
      } else {
        std::swap(sigma[counter[i]], sigma[i]);
      }
      sign = -sign;
      add_term();
      ++counter[i];
      i = 1;
    } else {
      counter[i] = 0;
      ++i;
    }
  }
  return out;
}

HouseholderReflector make_reflector(std::span<const double> x, std::size_t offset) {
  HouseholderReflector h{offset, RealVector(x.size(), 0.0), 0.0};
  if (x.empty()) return h;
  h.v[0] = 1.0;
  const double tail = norm2(x.subspan(1));
  if (tail == 0.0) return h;
  const double alpha = -std::copysign(norm2(x), x[0]);
  const double v0 = x[0] - alpha;
  for (std::size_t i = 1; i < x.size(); ++i) h.v[i] = x[i] / v0;
  h.beta = 2.0 / dot(h.v, h.v);
  return h;
}

namespace {

/// M[offset:, c0:] <- H M[offset:, c0:]
void reflect_rows(RealMatrix& m, const HouseholderReflector& h, std::size_t c0) {
  if (h.beta == 0.0) return;
  for (std::size_t j = c0; j < m.cols(); ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < h.v.size(); ++k) s += h.v[k] * m(h.offset + k, j);
    s *= h.beta;
    for (std::size_t k = 0; k < h.v.size(); ++k) m(h.offset + k, j) -= s * h.v[k];
  }
}

/// M[:, offset:] <- M[:, offset:] H
void reflect_cols(RealMatrix& m, const HouseholderReflector& h) {
  if (h.beta == 0.0) return;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < h.v.size(); ++k) s += m(i, h.offset + k) * h.v[k];
    s *= h.beta;
    for (std::size_t k = 0; k < h.v.size(); ++k) m(i, h.offset + k) -= s * h.v[k];
  }
}

}  // namespace

QrFactors householder_qr(const RealMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  if (m < n) throw Error(ErrorCode::ShapeMismatch, "Householder QR needs rows >= cols");
  QrFactors out{RealMatrix::identity(m), a, {}};
  const std::size_t steps = std::min(m - 1, n);
  for (std::size_t k = 0; k < steps; ++k) {
    RealVector x(m - k);
    for (std::size_t i = k; i < m; ++i) x[i - k] = out.r(i, k);
    HouseholderReflector h = make_reflector(x, k);
    reflect_rows(out.r, h, k);
    if (h.beta != 0.0) {
      for (std::size_t i = k + 1; i < m; ++i) out.r(i, k) = 0.0;
    }
    reflect_cols(out.q, h);
    out.reflectors.push_back(std::move(h));
  }
  return out;
}

RealMatrix givens(std::size_t n, std::size_t i, std::size_t j, double theta) {
  if (i >= n || j >= n || i == j) {
    throw Error(ErrorCode::InvalidArgument, "Givens rotation needs distinct indices below " + std::to_string(n));
  }
  RealMatrix g = RealMatrix::identity(n);
  const double c = std::cos(theta), s = std::sin(theta);
  g(i, i) = c;
  g(j, j) = c;
  g(i, j) = -s;
  g(j, i) = s;
  return g;
}

GramSchmidtFactors classical_gram_schmidt(const RealMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  GramSchmidtFactors out{RealMatrix(m, n), RealMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    const RealVector aj = a.column(j);
    RealVector v = aj;
    for (std::size_t i = 0; i < j; ++i) {
      double rij = 0.0;
      for (std::size_t k = 0; k < m; ++k) rij += out.q(k, i) * aj[k];
      out.r(i, j) = rij;
      for (std::size_t k = 0; k < m; ++k) v[k] -= rij * out.q(k, i);
    }
    const double rjj = norm2(v);
    if (rjj == 0.0) {
      throw Error(ErrorCode::ZeroColumn, "zero column norm at column " + std::to_string(j));
    }
    out.r(j, j) = rjj;
    for (std::size_t k = 0; k < m; ++k) out.q(k, j) = v[k] / rjj;
  }
  return out;
}

LeastSquaresResult least_squares(const RealMatrix& a, const RealVector& b) {
  const std::size_t m = a.rows(), n = a.cols();
  if (b.size() != m) throw Error(ErrorCode::ShapeMismatch, "right-hand side length does not match rows");
  if (m < n) throw Error(ErrorCode::ShapeMismatch, "least squares needs rows >= cols");
  const QrFactors f = householder_qr(a);
  const double thr = kRankDeficiencyTolerance * a.max_abs();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(f.r(i, i)) <= thr) {
      throw Error(ErrorCode::RankDeficient, "matrix is rank deficient: |r_" + std::to_string(i) + std::to_string(i) +
                                                "| below threshold");
    }
  }
  const RealVector qtb = f.q.transpose() * b;
  LeastSquaresResult out{RealVector(n, 0.0), 0.0};
  for (std::size_t ii = n; ii-- > 0;) {
    double s = qtb[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= f.r(ii, j) * out.x[j];
    out.x[ii] = s / f.r(ii, ii);
  }
  const RealVector ax = a * out.x;
  RealVector resid(m);
  for (std::size_t i = 0; i < m; ++i) resid[i] = b[i] - ax[i];
  out.residual_norm = norm2(resid);
  return out;
}

GramSchmidtComparison gs_compare(const RealMatrix& a) {
  if (a.rows() < a.cols()) throw Error(ErrorCode::ShapeMismatch, "need rows >= cols");
  const QrFactors qr = householder_qr(a);
  const double thr = static_cast<double>(std::max(a.rows(), a.cols())) * DBL_EPSILON * a.max_abs();
  for (std::size_t i = 0; i < a.cols(); ++i) {
    if (std::abs(qr.r(i, i)) <= thr) {
      throw Error(ErrorCode::RankDeficient, "columns are linearly dependent");
    }
  }
  const GramSchmidtFactors cgs = classical_gram_schmidt(a);
  GramSchmidtComparison out;
  out.classical_deviation = orthogonality_deviation(cgs.q);
  out.householder_deviation = orthogonality_deviation(qr.q);
  out.ratio = out.classical_deviation / std::max(out.householder_deviation, DBL_MIN);
  return out;
}

RealMatrix hilbert_matrix(std::size_t n) {
  RealMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = 1.0 / static_cast<double>(i + j + 1);
  return h;
}

#define MATRIXFIRST_INSTANTIATE(T)                                                   \
  template LuFactors<T> lu<T>(const Matrix<T>&, std::optional<LuPivoting>);          \
  template Matrix<T> permutation_matrix<T>(const std::vector<std::size_t>&);         \
  template T det_via_lu<T>(const Matrix<T>&);                                        \
  template PermutationExpansion<T> permutation_expansion<T>(const Matrix<T>&);

MATRIXFIRST_INSTANTIATE(Rational)
MATRIXFIRST_INSTANTIATE(double)

#undef MATRIXFIRST_INSTANTIATE

}  // namespace matrixfirst
