#include <random>

#include "doctest.h"
#include "matrixfirst/echelon.hpp"
#include "support.hpp"

using namespace matrixfirst;
using mftest::rvec;
using VL = std::vector<RationalVector>;

namespace {

std::vector<Pivot> pivots(std::initializer_list<std::pair<std::size_t, std::size_t>> ps) {
  std::vector<Pivot> out;
  for (auto [r, c] : ps) out.push_back({r, c});
  return out;
}

}  // namespace

TEST_CASE("ref examples") {
  const auto id = ref(RationalMatrix::identity(3));
  CHECK(id.pivots == pivots({{0, 0}, {1, 1}, {2, 2}}));
  CHECK(id.free_cols.empty());
  CHECK(id.trace.empty());

  const auto zero = ref(RationalMatrix(2, 3));
  CHECK(zero.rank == 0);
  CHECK(zero.free_cols == std::vector<std::size_t>{0, 1, 2});

  const auto dep = ref(RationalMatrix{{1, 2}, {2, 4}});
  CHECK(dep.rank == 1);
  CHECK(dep.pivots == pivots({{0, 0}}));
  CHECK(dep.free_cols == std::vector<std::size_t>{1});
  CHECK(dep.ref == RationalMatrix{{1, 2}, {0, 0}});
  REQUIRE(dep.trace.size() == 1);
  CHECK(std::get<AddMultiple<Rational>>(dep.trace.steps[0].op) ==
        AddMultiple<Rational>{0, Rational(-2), 1});
}

TEST_CASE("partial pivoting picks the largest magnitude, lowest index on ties") {
  const RationalMatrix a{{1, 0}, {-3, 1}, {3, 2}};
  const auto r = ref(a, {PivotStrategy::PartialPivot});
  REQUIRE_FALSE(r.trace.empty());
  CHECK(std::get<SwapRows>(r.trace.steps[0].op) == SwapRows{0, 1});
  CHECK(r.exchange_count >= 1);
  const auto f = ref(a, {PivotStrategy::FirstNonzero});
  CHECK(f.exchange_count == 0);
}

TEST_CASE("rref examples") {
  CHECK(*rref(RationalMatrix{{2, 0}, {0, 3}}).rref == RationalMatrix::identity(2));
  CHECK(*rref(RationalMatrix{{1, 2}, {2, 4}}).rref == RationalMatrix{{1, 2}, {0, 0}});
  const RationalMatrix already{{1, 0, 5}, {0, 1, Rational(-1, 2)}};
  const auto r = rref(already);
  CHECK(*r.rref == already);
  CHECK(r.trace.empty());
}

TEST_CASE("float REF uses the relative pivot threshold") {
  const RealMatrix a{{1.0, 2.0}, {2.0, 4.0 + 1e-13}};
  CHECK(ref(a).rank == 1);
  CHECK(ref(a, {PivotStrategy::FirstNonzero, 1e-15}).rank == 2);
  CHECK(is_ref(ref(a).ref));
  CHECK_THROWS_AS(ref(a, {PivotStrategy::FirstNonzero, -1.0}), Error);
}

TEST_CASE("row op validation") {
  using Op = RowOp<Rational>;
  CHECK(row_op_violation(Op{SwapRows{0, 0}}, 2));
  CHECK(row_op_violation(Op{SwapRows{0, 2}}, 2));
  CHECK(row_op_violation(Op{ScaleRow<Rational>{0, Rational(0)}}, 2));
  CHECK(row_op_violation(Op{AddMultiple<Rational>{1, Rational(3), 1}}, 2));
  CHECK_FALSE(row_op_violation(Op{AddMultiple<Rational>{1, Rational(3), 0}}, 2));
  RationalMatrix m = RationalMatrix::identity(2);
  CHECK_THROWS_AS(apply_row_op(m, Op{ScaleRow<Rational>{0, Rational(0)}}), Error);
  CHECK(m == RationalMatrix::identity(2));
  CHECK(describe(Op{AddMultiple<Rational>{0, Rational(-2), 1}}) == "AddMultiple(0,-2,1)");
}

TEST_CASE("solve examples") {
  const auto u = solve(RationalMatrix::identity(2), rvec({1, 2}));
  CHECK(std::get<UniqueSolution<Rational>>(u).x == rvec({1, 2}));

  const auto inc = solve(RationalMatrix{{1, 2}, {2, 4}}, rvec({1, 1}));
  CHECK(std::holds_alternative<InconsistentSystem>(inc));
  CHECK(std::get<InconsistentSystem>(inc).witness_row == 1);

  const RationalMatrix a{{1, 2}};
  const auto par = solve(a, rvec({3}));
  const auto& p = std::get<ParametricSolution<Rational>>(par);
  CHECK(p.particular == rvec({3, 0}));
  REQUIRE(p.nullspace.size() == 1);
  CHECK(p.nullspace[0] == rvec({-2, 1}));
  CHECK(a * p.particular == rvec({3}));
  CHECK(a * p.nullspace[0] == rvec({0}));

  CHECK_THROWS_AS(solve(a, rvec({1, 2})), Error);
}

TEST_CASE("nullspace_basis examples") {
  CHECK(nullspace_basis(RationalMatrix::identity(3)).empty());
  const auto z = nullspace_basis(RationalMatrix(2, 2));
  CHECK(z == std::vector<RationalVector>{rvec({1, 0}), rvec({0, 1})});
  const auto d = nullspace_basis(RationalMatrix{{1, 2}, {2, 4}});
  CHECK(d == std::vector<RationalVector>{rvec({-2, 1})});
}

TEST_CASE("is_independent examples") {
  CHECK(is_independent(VL{rvec({1, 0}), rvec({0, 1})}).independent);

  const auto two = is_independent(VL{rvec({1, 1}), rvec({2, 2})});
  CHECK_FALSE(two.independent);
  CHECK(two.dependency->index == 1);
  CHECK(two.dependency->coefficients == rvec({2}));

  const auto three = is_independent(VL{rvec({1, 0, 1}), rvec({0, 1, 1}), rvec({1, 1, 2})});
  CHECK_FALSE(three.independent);
  CHECK(three.dependency->index == 2);
  CHECK(three.dependency->coefficients == rvec({1, 1}));

  const auto zero_first = is_independent(VL{rvec({0, 0}), rvec({1, 0})});
  CHECK(zero_first.dependency->index == 0);
  CHECK(zero_first.dependency->coefficients.empty());

  CHECK_THROWS_AS(is_independent(VL{rvec({1}), rvec({1, 2})}), Error);
}

TEST_CASE("in_span examples") {
  const auto z = in_span(rvec({0, 0}), VL{rvec({1, 2})});
  CHECK(z.member);
  CHECK(*z.coefficients == rvec({0}));
  CHECK_FALSE(in_span(rvec({1, 0}), VL{rvec({0, 1})}).member);
  const auto t = in_span(rvec({3, 3}), VL{rvec({1, 1})});
  CHECK(t.member);
  CHECK(*t.coefficients == rvec({3}));
  CHECK(in_span(rvec({0, 0}), std::vector<RationalVector>{}).member);
  CHECK_FALSE(in_span(rvec({1, 0}), std::vector<RationalVector>{}).member);
}

TEST_CASE("span_equals examples") {
  const std::vector u{rvec({1, 2, 0}), rvec({0, 1, 1})};
  CHECK(span_equals(u, u));
  CHECK(span_equals(VL{rvec({1, 0})}, VL{rvec({2, 0})}));
  // Perturbed spanning set with z1 = e1, z2 = -e1, i = 2: {z1 + z2} = {0}.
  const RationalVector z1 = rvec({1, 0}), z2 = rvec({-1, 0});
  RationalVector perturbed(2);
  for (std::size_t k = 0; k < 2; ++k) perturbed[k] = z1[k] + z2[k];
  CHECK(span_equals(VL{z1, z2}, VL{rvec({1, 0})}));
  CHECK_FALSE(span_equals(VL{perturbed}, VL{rvec({1, 0})}));
}

TEST_CASE("independence_size_bound examples") {
  const auto e1 = rvec({1, 0}), e2 = rvec({0, 1});
  CHECK(independence_size_bound(VL{e1}, VL{e1, rvec({2, 0})}).forced_dependent);

  const auto r = independence_size_bound(VL{e1, e2}, VL{e1, e2, rvec({1, 1})});
  CHECK(r.forced_dependent);
  REQUIRE(r.dependency);
  CHECK(r.dependency->index == 2);
  CHECK(r.dependency->coefficients == rvec({1, 1}));
  CHECK(r.certificate.find("m = 3 > l = 2 >= dim(W) = k = 2") != std::string::npos);

  const auto same = independence_size_bound(VL{e1, e2}, VL{e1, e2});
  CHECK_FALSE(same.forced_dependent);
  CHECK_FALSE(same.dependency);

  try {
    independence_size_bound(VL{e1}, VL{e2});
    FAIL("expected NotInSpan");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotInSpan);
  }
}

TEST_CASE("basis_check examples") {
  const auto e = basis_check(VL{rvec({1, 0}), rvec({0, 1})}, 2);
  CHECK(e.is_basis);
  CHECK(e.reason == BasisReason::IndependentHenceSpanning);

  const auto few = basis_check(VL{rvec({1, 1})}, 2);
  CHECK_FALSE(few.is_basis);
  CHECK(few.reason == BasisReason::Fails);

  const auto b = basis_check(VL{rvec({1, 0}), rvec({1, 1})}, 2);
  CHECK(b.is_basis);
  CHECK(b.rank == 2);
  CHECK(b.count == 2);
  CHECK(b.duality_holds);

  const std::vector plane{rvec({1, 0, 0}), rvec({0, 1, 0}), rvec({1, 1, 0})};
  const auto s = basis_check(VL{rvec({1, 1, 0}), rvec({1, -1, 0})}, 2,
                             std::optional{plane});
  CHECK(s.is_basis);
  CHECK(s.reason == BasisReason::SpanningHenceIndependent);

  const auto outside = basis_check(VL{rvec({1, 1, 1}), rvec({1, -1, 0})}, 2,
                                   std::optional{plane});
  CHECK_FALSE(outside.is_basis);
}

// ---------------------------------------------------------------------------
// Properties
// ---------------------------------------------------------------------------

TEST_CASE("pivot positions do not depend on the pivot strategy") {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (int t = 0; t < 500; ++t) {
    const RationalMatrix a = mftest::random_mixed_rank_matrix(rng, dim(rng), dim(rng));
    const auto f = ref(a, {PivotStrategy::FirstNonzero});
    const auto p = ref(a, {PivotStrategy::PartialPivot});
    CHECK(f.pivots == p.pivots);
    CHECK(f.free_cols == p.free_cols);
    CHECK(is_ref(f.ref));
    CHECK(is_ref(p.ref));
    CHECK(f.rank <= std::min(a.rows(), a.cols()));
  }
}

TEST_CASE("replaying a trace reproduces every snapshot") {
  std::mt19937_64 rng(103);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (int t = 0; t < 100; ++t) {
    const RationalMatrix a = mftest::random_mixed_rank_matrix(rng, dim(rng), dim(rng));
    const auto r = rref(a, {PivotStrategy::PartialPivot});
    CHECK(verify_replay(a, r.trace).ok);
    if (!r.trace.empty()) {
      CHECK(r.trace.steps.back().after == *r.rref);
      auto tampered = r.trace;
      auto& snap = tampered.steps.front().after;
      snap(0, 0) += Rational(1);
      const auto check = verify_replay(a, tampered);
      CHECK_FALSE(check.ok);
      CHECK(check.first_mismatch == 0u);
    }
    CHECK(is_rref(*r.rref));
  }
}

TEST_CASE("solutions substitute back exactly") {
  std::mt19937_64 rng(107);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (int t = 0; t < 200; ++t) {
    const RationalMatrix a = mftest::random_mixed_rank_matrix(rng, dim(rng), dim(rng));
    // Half the right-hand sides are consistent by construction.
    RationalVector b = mftest::random_rational_matrix(rng, a.rows(), 1).column(0);
    if (t % 2 == 0) b = a * mftest::random_rational_matrix(rng, a.cols(), 1).column(0);
    const auto sol = solve(a, b);
    if (const auto* u = std::get_if<UniqueSolution<Rational>>(&sol)) {
      CHECK(a * u->x == b);
      CHECK(rank(a) == a.cols());
    } else if (const auto* p = std::get_if<ParametricSolution<Rational>>(&sol)) {
      CHECK(a * p->particular == b);
      for (const auto& v : p->nullspace) CHECK(is_zero_vector(a * v));
      CHECK(p->nullspace.size() == a.cols() - rank(a));
    } else {
      CHECK(t % 2 == 1);
    }
    for (const auto& v : nullspace_basis(a)) CHECK(is_zero_vector(a * v));
  }
}

TEST_CASE("row rank equals column rank") {
  std::mt19937_64 rng(109);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (int t = 0; t < 200; ++t) {
    const RationalMatrix a = mftest::random_mixed_rank_matrix(rng, dim(rng), dim(rng));
    CHECK(rank(a) == rank(a.transpose()));
  }
}

TEST_CASE("dependent iff the nullspace is nonempty; dependencies reproduce the vector") {
  std::mt19937_64 rng(113);
  std::uniform_int_distribution<std::size_t> dim(1, 5);
  for (int t = 0; t < 200; ++t) {
    const RationalMatrix a = mftest::random_mixed_rank_matrix(rng, dim(rng), dim(rng));
    const auto vecs = a.columns();
    const auto ind = is_independent(vecs);
    CHECK(ind.independent == nullspace_basis(a).empty());
    if (ind.dependency) {
      RationalVector combo(a.rows(), Rational(0));
      for (std::size_t i = 0; i < ind.dependency->coefficients.size(); ++i)
        for (std::size_t k = 0; k < a.rows(); ++k) combo[k] += ind.dependency->coefficients[i] * vecs[i][k];
      CHECK(combo == vecs[ind.dependency->index]);
    }
  }
}

TEST_CASE("bases extracted from spanning sets pass basis_check both ways") {
  std::mt19937_64 rng(127);
  std::uniform_int_distribution<std::size_t> dim(1, 5);
  for (int t = 0; t < 100; ++t) {
    const RationalMatrix a = mftest::random_mixed_rank_matrix(rng, dim(rng), dim(rng));
    const auto spanning = a.columns();
    const auto r = ref(a);
    std::vector<RationalVector> basis;
    for (const auto& p : r.pivots) basis.push_back(spanning[p.col]);
    CHECK(basis.size() == r.rank);
    if (basis.empty()) continue;
    const auto fwd = basis_check(basis, r.rank);
    CHECK(fwd.is_basis);
    CHECK(fwd.reason == BasisReason::IndependentHenceSpanning);
    const auto back = basis_check(basis, r.rank, std::optional{spanning});
    CHECK(back.is_basis);
    CHECK(back.reason == BasisReason::SpanningHenceIndependent);
    CHECK(back.duality_holds);
  }
}
