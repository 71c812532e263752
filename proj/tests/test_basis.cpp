#include <random>

#include "doctest.h"
#include "matrixfirst/basis.hpp"
#include "support.hpp"

using namespace matrixfirst;
using mftest::rvec;
using VL = std::vector<RationalVector>;

TEST_CASE("invert examples") {
  CHECK(invert(RationalMatrix::identity(3)) == RationalMatrix::identity(3));

  const RationalMatrix a{{1, 2}, {3, 4}};
  const RationalMatrix expected{{Rational(-2), Rational(1)}, {Rational(3, 2), Rational(-1, 2)}};
  const auto inv = invert_traced(a);
  CHECK(inv.inverse == expected);
  CHECK(mftest::naive_product(a, inv.inverse) == RationalMatrix::identity(2));
  CHECK_FALSE(inv.trace.empty());

  try {
    invert(RationalMatrix{{1, 2}, {2, 4}});
    FAIL("expected SingularMatrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularMatrix);
    CHECK(std::string(e.what()).find("rank 1") != std::string::npos);
  }
  CHECK_THROWS_AS(invert(RationalMatrix{{1, 2, 3}}), Error);
}

TEST_CASE("float inverse within tolerance") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const RealMatrix a = mftest::random_real_matrix(rng, 5, 5);
    const RealMatrix prod = mftest::naive_product(a, invert(a));
    CHECK(max_abs_diff(prod, RealMatrix::identity(5)) <= 1e-10 * a.max_abs());
  }
}

TEST_CASE("invert round trip is exact on random nonsingular matrices") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  int done = 0;
  while (done < 200) {
    const std::size_t n = dim(rng);
    const RationalMatrix a = mftest::random_rational_matrix(rng, n, n);
    if (rank(a) != n) continue;
    const RationalMatrix inv = invert(a);
    CHECK(mftest::naive_product(a, inv) == RationalMatrix::identity(n));
    CHECK(mftest::naive_product(inv, a) == RationalMatrix::identity(n));
    ++done;
  }
}

TEST_CASE("BasisSet rejects non-bases") {
  CHECK_THROWS_AS(BasisSet<Rational>(VL{rvec({1, 2}), rvec({2, 4})}), Error);
  CHECK_THROWS_AS(BasisSet<Rational>(VL{rvec({1, 2, 3})}), Error);
  CHECK(BasisSet<Rational>::standard(3).as_matrix() == RationalMatrix::identity(3));
}

TEST_CASE("coordinates_in_basis examples") {
  const auto e = BasisSet<Rational>::standard(3);
  CHECK(coordinates_in_basis(rvec({4, -1, 7}), e) == rvec({4, -1, 7}));

  const BasisSet<Rational> u(VL{rvec({1, 1}), rvec({1, -1})});
  CHECK(coordinates_in_basis(rvec({3, 3}), u) == rvec({3, 0}));
  CHECK(coordinates_in_basis(rvec({0, 0}), u) == rvec({0, 0}));
}

TEST_CASE("coordinates reconstruct the vector") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + t % 5;
    const BasisSet<Rational> u = BasisSet<Rational>::from_matrix(mftest::random_unimodular(rng, n));
    const RationalVector v = mftest::random_rational_matrix(rng, n, 1).column(0);
    const RationalVector c = coordinates_in_basis(v, u);
    RationalVector back(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) back[i] += u.as_matrix()(i, j) * c[j];
    CHECK(back == v);
  }
}

TEST_CASE("change_of_basis examples") {
  const RationalMatrix a{{1, 2}, {3, 4}};
  CHECK(change_of_basis(a, BasisSet<Rational>::standard(2)) == a);

  const BasisSet<Rational> swap(VL{rvec({0, 1}), rvec({1, 0})});
  CHECK(change_of_basis(RationalMatrix{{2, 0}, {0, 3}}, swap) == RationalMatrix{{3, 0}, {0, 2}});

  const BasisSet<Rational> scaled(VL{rvec({1, 0}), rvec({0, 2})});
  CHECK(change_of_basis(RationalMatrix{{2, 1}, {0, 2}}, scaled) == RationalMatrix{{2, 2}, {0, 2}});
}

TEST_CASE("eigenbasis_representation examples") {
  const BasisSet<Rational> any(VL{rvec({1, 2}), rvec({3, 5})});
  CHECK(eigenbasis_representation(RationalMatrix::identity(2), any) == RationalMatrix::identity(2));

  const BasisSet<Rational> eig(VL{rvec({1, 1}), rvec({1, -1})});
  CHECK(eigenbasis_representation(RationalMatrix{{2, 1}, {1, 2}}, eig) == RationalMatrix{{3, 0}, {0, 1}});

  CHECK_THROWS_AS(eigenbasis_representation(RationalMatrix{{0, 1}, {0, 0}}, BasisSet<Rational>::standard(2)),
                  Error);

  const BasisSet<double> feig = BasisSet<double>::from_matrix(RealMatrix{{1.0, 1.0}, {1.0, -1.0}});
  const RealMatrix rep = eigenbasis_representation(RealMatrix{{2.0, 1.0}, {1.0, 2.0}}, feig);
  CHECK(rep(0, 0) == doctest::Approx(3.0));
  CHECK(rep(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("change_of_basis is a similarity: trace and composition") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + t % 4;
    const RationalMatrix a = mftest::random_int_matrix(rng, n, n);
    const RationalMatrix um = mftest::random_unimodular(rng, n);
    const RationalMatrix au = change_of_basis(a, BasisSet<Rational>::from_matrix(um));
    CHECK(mftest::naive_product(um, au) == mftest::naive_product(a, um));
  }
}
