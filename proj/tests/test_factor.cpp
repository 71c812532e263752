#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "matrixfirst/basis.hpp"
#include "matrixfirst/factor.hpp"
#include "matrixfirst/geometry.hpp"
#include "support.hpp"

using namespace matrixfirst;
using mftest::naive_product;
using mftest::cofactor_det;

namespace {

/// Cofactor expansion along the first row; a second oracle independent of
/// both the LR path and the permutation sum.
RealVector residual(const RealMatrix& a, const RealVector& x, const RealVector& b) {
  RealVector r(b);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r[i] -= a(i, j) * x[j];
  return r;
}

bool upper_triangular(const RealMatrix& r, double tol) {
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < std::min(i, r.cols()); ++j)
      if (std::abs(r(i, j)) > tol) return false;
  return true;
}

}  // namespace

TEST_CASE("lu examples") {
  const auto id = lu(RationalMatrix::identity(3));
  CHECK(id.l == RationalMatrix::identity(3));
  CHECK(id.r == RationalMatrix::identity(3));
  CHECK(id.exchange_count == 0);

  const auto sw = lu(RationalMatrix{{0, 1}, {1, 0}}, LuPivoting::Partial);
  CHECK(sw.exchange_count == 1);
  CHECK(sw.r == RationalMatrix::identity(2));
  CHECK(sw.perm == std::vector<std::size_t>{1, 0});

  const auto f = lu(RationalMatrix{{4, 3}, {6, 3}}, LuPivoting::None);
  CHECK(f.l == RationalMatrix{{Rational(1), Rational(0)}, {Rational(3, 2), Rational(1)}});
  CHECK(f.r == RationalMatrix{{Rational(4), Rational(3)}, {Rational(0), Rational(-3, 2)}});
  CHECK(naive_product(f.l, f.r) == RationalMatrix{{4, 3}, {6, 3}});

  try {
    lu(RationalMatrix{{0, 1}, {1, 0}}, LuPivoting::None);
    FAIL("expected ZeroPivot");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroPivot);
  }
  CHECK_THROWS_AS(lu(RationalMatrix{{1, 2, 3}}), Error);
}

TEST_CASE("lu trace replays onto R") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const RationalMatrix a = mftest::random_mixed_rank_matrix(rng, 4, 4);
    const auto f = lu(a);
    CHECK(verify_replay(a, f.trace).ok);
    if (!f.trace.empty()) CHECK(f.trace.steps.back().after == f.r);
  }
}

TEST_CASE("P A = L R exactly with partial pivoting") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = dim(rng);
    const RationalMatrix a = mftest::random_mixed_rank_matrix(rng, n, n);
    for (LuPivoting mode : {LuPivoting::Partial, LuPivoting::FirstNonzero}) {
      const auto f = lu(a, mode);
      CHECK(naive_product(permutation_matrix<Rational>(f.perm), a) == naive_product(f.l, f.r));
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(f.l(i, i) == Rational(1));
        for (std::size_t j = i + 1; j < n; ++j) CHECK(f.l(i, j).is_zero());
        for (std::size_t j = 0; j < i; ++j) CHECK(f.r(i, j).is_zero());
      }
      // Parity of the recorded exchanges matches the permutation's sign.
      CHECK(det_permutation_oracle(permutation_matrix<Rational>(f.perm)) ==
            Rational(f.exchange_count % 2 == 0 ? 1 : -1));
    }
  }
}

TEST_CASE("float lu residual") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const RealMatrix a = mftest::random_real_matrix(rng, 6, 6);
    const auto f = lu(a);
    const RealMatrix pa = naive_product(permutation_matrix<double>(f.perm), a);
    CHECK(max_abs_diff(pa, naive_product(f.l, f.r)) <= 1e-10 * a.max_abs());
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < i; ++j) CHECK(std::abs(f.l(i, j)) <= 1.0);
  }
}

TEST_CASE("determinant examples") {
  CHECK(det_via_lu(RationalMatrix::identity(4)) == Rational(1));
  CHECK(det_via_lu(RationalMatrix{{1, 2, 3}, {4, 5, 6}, {1, 2, 3}}) == Rational(0));
  CHECK(det_via_lu(RationalMatrix{{1, 2}, {3, 4}}) == Rational(-2));

  CHECK(det_permutation_oracle(RationalMatrix{{Rational(7, 3)}}) == Rational(7, 3));
  CHECK(det_permutation_oracle(RationalMatrix{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}) == Rational(-1));
  CHECK(permutation_expansion(RationalMatrix::identity(3)).terms == 6);
  CHECK(permutation_expansion(RationalMatrix::identity(5)).terms == 120);
  CHECK(permutation_expansion(RationalMatrix::identity(8)).terms == 40320);
  try {
    det_permutation_oracle(RationalMatrix::identity(9));
    FAIL("expected DimensionTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionTooLarge);
  }
}

TEST_CASE("det via LU, permutation sum and cofactor expansion agree") {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = dim(rng);
    const RationalMatrix a = mftest::random_mixed_rank_matrix(rng, n, n);
    const Rational d = det_via_lu(a);
    CHECK(d == det_permutation_oracle(a));
    CHECK(d == cofactor_det(a));
    CHECK(d == det_via_lu(a.transpose()));
  }
}

TEST_CASE("five determinant rules") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::size_t> dim(1, 5);
  std::uniform_int_distribution<long> small(-4, 4);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = dim(rng);
    const RationalMatrix a = mftest::random_rational_matrix(rng, n, n);
    const RationalMatrix b = mftest::random_rational_matrix(rng, n, n);
    const Rational da = det_via_lu(a);
    CHECK(det_via_lu(naive_product(a, b)) == da * det_via_lu(b));

    std::uniform_int_distribution<std::size_t> row(0, n - 1);
    const std::size_t i = row(rng), j = row(rng);
    if (i != j) {
      RationalMatrix s = a;
      apply_row_op(s, RowOp<Rational>{SwapRows{i, j}});
      CHECK(det_via_lu(s) == -da);

      RationalMatrix m = a;
      apply_row_op(m, RowOp<Rational>{AddMultiple<Rational>{i, Rational(small(rng), 3), j}});
      CHECK(det_via_lu(m) == da);
    }
    Rational alpha(small(rng), 2);
    if (alpha.is_zero()) alpha = Rational(5, 7);
    RationalMatrix sc = a;
    apply_row_op(sc, RowOp<Rational>{ScaleRow<Rational>{i, alpha}});
    CHECK(det_via_lu(sc) == alpha * da);

    RationalMatrix tri = a;
    const bool lower = t % 2 == 0;
    Rational diag(1);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c)
        if (lower ? c > r : c < r) tri(r, c) = Rational(0);
      diag *= tri(r, r);
    }
    CHECK(det_via_lu(tri) == diag);
  }
}

TEST_CASE("det is zero exactly when columns are dependent") {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 5;
    const RationalMatrix a = mftest::random_mixed_rank_matrix(rng, n, n);
    CHECK(det_via_lu(a).is_zero() == !is_independent(a.columns()).independent);
  }
}

TEST_CASE("det of a planar rotation is one") {
  for (double th : {0.0, 0.3, 1.0, 2.5, -4.0}) {
    CHECK(std::abs(det_via_lu(rotation2d(th)) - 1.0) <= 1e-14);
  }
}

TEST_CASE("householder_qr examples") {
  const auto id = householder_qr(RealMatrix::identity(4));
  CHECK(id.q == RealMatrix::identity(4));
  CHECK(id.r == RealMatrix::identity(4));

  const RealMatrix rot = rotation2d(0.7);
  const auto fr = householder_qr(rot);
  CHECK(std::abs(std::abs(fr.r(0, 0)) - 1.0) < 1e-14);
  CHECK(std::abs(std::abs(fr.r(1, 1)) - 1.0) < 1e-14);
  CHECK(std::abs(fr.r(0, 1)) < 1e-14);

  std::mt19937_64 rng(41);
  const RealMatrix a = mftest::random_real_matrix(rng, 5, 3);
  const auto f = householder_qr(a);
  CHECK(f.q.rows() == 5);
  CHECK(f.r.rows() == 5);
  CHECK(f.r.cols() == 3);
  CHECK(orthogonality_deviation(f.q) < 1e-12);
  CHECK(max_abs_diff(naive_product(f.q, f.r), a) < 1e-12 * a.max_abs());
  CHECK(upper_triangular(f.r, 0.0));
  for (const auto& h : f.reflectors) CHECK(h.v[0] == 1.0);
}

TEST_CASE("householder reflector sign avoids cancellation") {
  const std::vector<double> x{3.0, 4.0};
  const auto h = make_reflector(x, 0);
  // H x = x - beta v (v.x)
  const double vx = h.v[0] * x[0] + h.v[1] * x[1];
  CHECK(x[0] - h.beta * h.v[0] * vx == doctest::Approx(-5.0));
  CHECK(std::abs(x[1] - h.beta * h.v[1] * vx) < 1e-15);
  const auto id = make_reflector(std::vector<double>{-2.0, 0.0, 0.0}, 1);
  CHECK(id.beta == 0.0);
}

TEST_CASE("householder_qr properties on random shapes") {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<std::size_t> rows(1, 12);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = rows(rng);
    std::uniform_int_distribution<std::size_t> cols(1, m);
    const RealMatrix a = mftest::random_real_matrix(rng, m, cols(rng));
    const auto f = householder_qr(a);
    CHECK(orthogonality_deviation(f.q) < 1e-12);
    CHECK(max_abs_diff(naive_product(f.q, f.r), a) < 1e-12 * a.max_abs());
    CHECK(upper_triangular(f.r, 1e-12 * a.max_abs()));
  }
  CHECK_THROWS_AS(householder_qr(RealMatrix(2, 3)), Error);
}

TEST_CASE("givens examples") {
  CHECK(givens(3, 0, 2, 0.0) == RealMatrix::identity(3));
  CHECK(max_abs_diff(givens(2, 0, 1, std::numbers::pi / 2), rotation2d(std::numbers::pi / 2)) < 1e-15);
  const RealMatrix g = givens(2, 1, 0, std::atan2(4.0, 3.0));
  const RealVector y = g * RealVector{3.0, 4.0};
  CHECK(y[0] == doctest::Approx(5.0));
  CHECK(std::abs(y[1]) < 1e-14);
  CHECK(orthogonality_deviation(givens(5, 1, 3, 0.77)) < 1e-14);
  CHECK_THROWS_AS(givens(3, 1, 1, 0.2), Error);
  CHECK_THROWS_AS(givens(3, 1, 3, 0.2), Error);
}

TEST_CASE("classical Gram-Schmidt") {
  const auto id = classical_gram_schmidt(RealMatrix::identity(3));
  CHECK(id.q == RealMatrix::identity(3));

  const RealMatrix rot = rotation2d(1.1);
  CHECK(max_abs_diff(classical_gram_schmidt(rot).q, rot) < 1e-15);

  std::mt19937_64 rng(47);
  const RealMatrix a = mftest::random_real_matrix(rng, 6, 4);
  const auto f = classical_gram_schmidt(a);
  CHECK(max_abs_diff(naive_product(f.q, f.r), a) < 1e-12 * a.max_abs());

  try {
    classical_gram_schmidt(RealMatrix{{1.0, 0.0}, {1.0, 0.0}});
    FAIL("expected ZeroColumn");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroColumn);
  }
}

TEST_CASE("Gram-Schmidt loses orthogonality on the Hilbert matrix") {
  const auto cmp = gs_compare(hilbert_matrix(10));
  CHECK(cmp.classical_deviation > cmp.householder_deviation);
  CHECK(cmp.ratio >= 1e6);
  CHECK_THROWS_AS(gs_compare(RealMatrix{{1.0, 2.0}, {2.0, 4.0}}), Error);
}

TEST_CASE("least squares examples") {
  const RealMatrix sq{{2.0, 1.0}, {1.0, 3.0}};
  const auto exact = least_squares(sq, RealVector{3.0, 5.0});  // x = (0.8, 1.4)
  CHECK(exact.x[0] == doctest::Approx(0.8));
  CHECK(exact.x[1] == doctest::Approx(1.4));
  CHECK(exact.residual_norm < 1e-14);

  const auto avg = least_squares(RealMatrix{{1.0}, {1.0}}, RealVector{0.0, 2.0});
  CHECK(avg.x[0] == doctest::Approx(1.0));
  CHECK(avg.residual_norm == doctest::Approx(std::sqrt(2.0)));

  const auto orth = least_squares(RealMatrix{{1.0}, {0.0}}, RealVector{0.0, 5.0});
  CHECK(std::abs(orth.x[0]) < 1e-15);
  CHECK(orth.residual_norm == doctest::Approx(5.0));

  try {
    least_squares(RealMatrix{{1.0, 2.0}, {2.0, 4.0}, {3.0, 6.0}}, RealVector{1.0, 2.0, 3.0});
    FAIL("expected RankDeficient");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankDeficient);
  }
}

TEST_CASE("least squares optimality") {
  std::mt19937_64 rng(53);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 3 + t % 8;
    const std::size_t n = 1 + t % m;
    const RealMatrix a = mftest::random_real_matrix(rng, m, n);
    const RealVector b = mftest::random_real_matrix(rng, m, 1).column(0);
    const auto ls = least_squares(a, b);
    const RealVector r = residual(a, ls.x, b);
    CHECK(norm2(r) == doctest::Approx(ls.residual_norm));
    // Normal equations: Aᵀ r ~ 0.
    const RealVector atr = a.transpose() * r;
    double a_fro = 0.0;
    for (double v : a.data()) a_fro += v * v;
    CHECK(norm2(atr) <= 1e-9 * std::sqrt(a_fro) * norm2(b));

    for (int k = 0; k < 10; ++k) {
      RealVector delta(n);
      for (auto& d : delta) d = nd(rng);
      const double s = 1e-3 / norm2(delta);
      RealVector xp = ls.x;
      for (std::size_t i = 0; i < n; ++i) xp[i] += s * delta[i];
      CHECK(norm2(residual(a, xp, b)) >= ls.residual_norm);
    }
  }
}

TEST_CASE("hilbert matrix entries") {
  const RealMatrix h = hilbert_matrix(3);
  CHECK(h(0, 0) == 1.0);
  CHECK(h(1, 2) == doctest::Approx(0.25));
  CHECK(h(2, 2) == doctest::Approx(0.2));
}

TEST_CASE("LU-based inverse cross-checks Gauss-Jordan") {
  std::mt19937_64 rng(59);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + t % 5;
    const RationalMatrix a = mftest::random_unimodular(rng, n);
    const auto f = lu(a);
    // Solve L R X = P column by column with forward and back substitution.
    const RationalMatrix p = permutation_matrix<Rational>(f.perm);
    RationalMatrix x(n, n);
    for (std::size_t c = 0; c < n; ++c) {
      RationalVector y(n);
      for (std::size_t i = 0; i < n; ++i) {
        y[i] = p(i, c);
        for (std::size_t k = 0; k < i; ++k) y[i] -= f.l(i, k) * y[k];
      }
      for (std::size_t i = n; i-- > 0;) {
        Rational s = y[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= f.r(i, k) * x(k, c);
        x(i, c) = s / f.r(i, i);
      }
    }
    CHECK(x == invert(a));
  }
}
