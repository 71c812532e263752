#include "matrixfirst/eigen.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <random>

#include "matrixfirst/factor.hpp"
#include "matrixfirst/geometry.hpp"

namespace matrixfirst {

// ---------------------------------------------------------------------------
// Krylov
// ---------------------------------------------------------------------------

KrylovIteration::KrylovIteration(RationalMatrix a, RationalVector b) : a_(std::move(a)) {
  if (!a_.is_square()) throw Error(ErrorCode::ShapeMismatch, "Krylov iteration needs a square matrix");
  if (b.size() != a_.rows()) throw Error(ErrorCode::ShapeMismatch, "start vector length does not match matrix");
  if (is_zero_vector(b)) throw Error(ErrorCode::InvalidArgument, "Krylov iteration needs a nonzero start vector");
  iterates_.push_back(std::move(b));
}

bool KrylovIteration::append() {
  if (done()) throw Error(ErrorCode::InvalidArgument, "Krylov iteration already found its dependency");
  iterates_.push_back(a_ * iterates_.back());
  const std::size_t d = iterates_.size() - 1;
  const RationalMatrix k = iterate_matrix();
  EchelonOptions opts;
  opts.record_trace = false;
  if (ref(k, opts).rank == d + 1) return false;

  // The earlier iterates are independent, so the new one is a unique
  // combination of them.
  const RationalMatrix prev = RationalMatrix::from_columns(std::vector<RationalVector>(iterates_.begin(), iterates_.end() - 1));
  const auto sol = solve(prev, iterates_.back(), opts);
  const RationalVector& c = std::get<UniqueSolution<Rational>>(sol).x;
  KrylovResult r;
  r.iterates = iterates_;
  r.dependency.resize(d + 1);
  for (std::size_t i = 0; i < d; ++i) r.dependency[i] = -c[i];
  r.dependency[d] = Rational(1);
  r.annihilator = Polynomial(r.dependency);
  result_ = std::move(r);
  return true;
}

KrylovResult krylov_annihilator(const RationalMatrix& a, const RationalVector& b) {
  KrylovIteration it(a, b);
  while (!it.append()) {
  }
  return *it.result();
}

Polynomial minimal_polynomial(const RationalMatrix& a) {
  if (!a.is_square()) throw Error(ErrorCode::ShapeMismatch, "minimal polynomial needs a square matrix");
  const std::size_t n = a.rows();
  Polynomial p = Polynomial::monomial(0);
  for (std::size_t i = 0; i < n && static_cast<std::size_t>(p.degree()) < n; ++i) {
    const RationalVector e = unit_vector<Rational>(n, i);
    // The annihilator of e_i divides every polynomial that kills e_i.
    if (is_zero_vector(eval_matrix(p, a) * e)) continue;
    p = gcd_lcm(p, krylov_annihilator(a, e).annihilator).lcm;
  }
  return p.monic();
}

bool certify_minimal_polynomial(const Polynomial& p, const RationalMatrix& a) {
  if (!a.is_square() || p.is_zero()) return false;
  if (!eval_matrix(p, a).is_zero()) return false;
  const std::size_t n = a.rows();
  const auto d = static_cast<std::size_t>(p.degree());
  if (d == 0) return false;
  std::vector<RationalVector> powers;
  RationalMatrix power = RationalMatrix::identity(n);
  for (std::size_t k = 0; k < d; ++k) {
    powers.emplace_back(power.data().begin(), power.data().end());
    power = power * a;
  }
  return is_independent(powers).independent;
}

// ---------------------------------------------------------------------------
// Hessenberg
// ---------------------------------------------------------------------------

namespace {

void require_square_real(const RealMatrix& a, const char* what) {
  if (!a.is_square()) throw Error(ErrorCode::ShapeMismatch, std::string(what) + " needs a square matrix");
}

/// Rows [h.offset, h.offset + |v|) of M, columns [c0, c1).
void reflect_rows(RealMatrix& m, const HouseholderReflector& h, std::size_t c0, std::size_t c1) {
  if (h.beta == 0.0) return;
  for (std::size_t j = c0; j < c1; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < h.v.size(); ++k) s += h.v[k] * m(h.offset + k, j);
    s *= h.beta;
    for (std::size_t k = 0; k < h.v.size(); ++k) m(h.offset + k, j) -= s * h.v[k];
  }
}

/// Columns [h.offset, h.offset + |v|) of M, rows [r0, r1).
void reflect_cols(RealMatrix& m, const HouseholderReflector& h, std::size_t r0, std::size_t r1) {
  if (h.beta == 0.0) return;
  for (std::size_t i = r0; i < r1; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < h.v.size(); ++k) s += m(i, h.offset + k) * h.v[k];
    s *= h.beta;
    for (std::size_t k = 0; k < h.v.size(); ++k) m(i, h.offset + k) -= s * h.v[k];
  }
}

/// Rows p, q ← [c s; −s c] rows p, q over columns [c0, c1).
void rotate_rows(RealMatrix& m, std::size_t p, std::size_t q, double c, double s, std::size_t c0, std::size_t c1) {
  for (std::size_t j = c0; j < c1; ++j) {
    const double x = m(p, j), y = m(q, j);
    m(p, j) = c * x + s * y;
    m(q, j) = -s * x + c * y;
  }
}

/// Columns p, q ← columns times [c −s; s c] over rows [r0, r1).
void rotate_cols(RealMatrix& m, std::size_t p, std::size_t q, double c, double s, std::size_t r0, std::size_t r1) {
  for (std::size_t i = r0; i < r1; ++i) {
    const double x = m(i, p), y = m(i, q);
    m(i, p) = c * x + s * y;
    m(i, q) = -s * x + c * y;
  }
}

}  // namespace

HessenbergResult hessenberg(const RealMatrix& a) {
  require_square_real(a, "Hessenberg reduction");
  const std::size_t n = a.rows();
  HessenbergResult out{a, RealMatrix::identity(n)};
  for (std::size_t k = 0; k + 2 < n; ++k) {
    RealVector x(n - k - 1);
    for (std::size_t i = k + 1; i < n; ++i) x[i - k - 1] = out.h(i, k);
    const HouseholderReflector h = make_reflector(x, k + 1);
    if (h.beta == 0.0) continue;
    reflect_rows(out.h, h, k, n);
    reflect_cols(out.h, h, 0, n);
    reflect_cols(out.q, h, 0, n);
    for (std::size_t i = k + 2; i < n; ++i) out.h(i, k) = 0.0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shifted QR
// ---------------------------------------------------------------------------

NoConvergenceError::NoConvergenceError(std::size_t iterations, std::vector<ComplexF> deflated, RealMatrix partial)
    : Error(ErrorCode::NoConvergence, "QR iteration did not converge within " + std::to_string(iterations) +
                                          " sweeps (" + std::to_string(deflated.size()) + " eigenvalues deflated)"),
      iterations_(iterations),
      deflated_(std::move(deflated)),
      partial_(std::move(partial)) {}

namespace {

struct TwoByTwo {
  bool real = true;
  ComplexF l1, l2;
};

/// Eigenvalues of [[a, b], [c, d]] with the discriminant formed as p² + bc,
/// p = (a − d)/2, which does not cancel for nearly equal diagonals.
TwoByTwo eig2(double a, double b, double c, double d) {
  const double p = 0.5 * (a - d);
  const double disc = p * p + b * c;
  if (disc >= 0.0) {
    const double z = p + std::copysign(std::sqrt(disc), p);
    const double l1 = d + z;
    const double l2 = (z != 0.0) ? d - (b / z) * c : d;
    return {true, {l1, 0.0}, {l2, 0.0}};
  }
  const double mid = 0.5 * (a + d);
  const double im = std::sqrt(-disc);
  return {false, {mid, im}, {mid, -im}};
}

class SchurIteration {
 public:
  SchurIteration(RealMatrix h, RealMatrix z, double norm) : h_(std::move(h)), z_(std::move(z)), norm_(norm) {}

  void run(std::size_t max_sweeps);

  RealMatrix& h() { return h_; }
  RealMatrix& z() { return z_; }
  std::size_t sweeps() const { return sweeps_; }

 private:
  bool negligible(std::size_t i) const {
    double s = std::abs(h_(i - 1, i - 1)) + std::abs(h_(i, i));
    if (s == 0.0) s = norm_;
    return std::abs(h_(i, i - 1)) <= kDeflationTolerance * s;
  }
  void standardize_block(std::size_t i);
  void single_shift_sweep(std::size_t lo, std::size_t hi, double mu);
  void double_shift_sweep(std::size_t lo, std::size_t hi, double s, double t);
  std::vector<ComplexF> deflated_values(std::size_t hi_exclusive) const;

  RealMatrix h_;
  RealMatrix z_;
  double norm_;
  std::size_t sweeps_ = 0;
};

/// Rotates a real-eigenvalue 2x2 block at (i, i+1) to upper triangular form.
void SchurIteration::standardize_block(std::size_t i) {
  const std::size_t n = h_.rows(), j = i + 1;
  const double a = h_(i, i), b = h_(i, j), c = h_(j, i), d = h_(j, j);
  const TwoByTwo ev = eig2(a, b, c, d);
  if (!ev.real || c == 0.0) return;
  const double lambda = ev.l1.real();
  // Two representations of the eigenvector for lambda; take the larger.
  double vx = b, vy = lambda - a;
  const double wx = lambda - d, wy = c;
  if (std::hypot(wx, wy) > std::hypot(vx, vy)) {
    vx = wx;
    vy = wy;
  }
  const double r = std::hypot(vx, vy);
  if (r == 0.0) return;
  const double cs = vx / r, sn = vy / r;
  rotate_rows(h_, i, j, cs, sn, i, n);
  rotate_cols(h_, i, j, cs, sn, 0, j + 1);
  rotate_cols(z_, i, j, cs, sn, 0, n);
  h_(j, i) = 0.0;
}

void SchurIteration::single_shift_sweep(std::size_t lo, std::size_t hi, double mu) {
  const std::size_t n = h_.rows();
  double x = h_(lo, lo) - mu, y = h_(lo + 1, lo);
  for (std::size_t k = lo; k < hi; ++k) {
    const double r = std::hypot(x, y);
    const double c = (r == 0.0) ? 1.0 : x / r, s = (r == 0.0) ? 0.0 : y / r;
    rotate_rows(h_, k, k + 1, c, s, k > lo ? k - 1 : lo, n);
    rotate_cols(h_, k, k + 1, c, s, 0, std::min(k + 3, hi + 1));
    rotate_cols(z_, k, k + 1, c, s, 0, n);
    if (k > lo) h_(k + 1, k - 1) = 0.0;
    if (k + 1 < hi) {
      x = h_(k + 1, k);
      y = h_(k + 2, k);
    }
  }
}

void SchurIteration::double_shift_sweep(std::size_t lo, std::size_t hi, double s, double t) {
  const std::size_t n = h_.rows();
  double x = h_(lo, lo) * h_(lo, lo) + h_(lo, lo + 1) * h_(lo + 1, lo) - s * h_(lo, lo) + t;
  double y = h_(lo + 1, lo) * (h_(lo, lo) + h_(lo + 1, lo + 1) - s);
  double z = h_(lo + 1, lo) * h_(lo + 2, lo + 1);
  for (std::size_t p = lo; p + 2 <= hi; ++p) {
    const double xs[3] = {x, y, z};
    const HouseholderReflector r = make_reflector(xs, p);
    const std::size_t c0 = p > lo ? p - 1 : lo;
    reflect_rows(h_, r, c0, n);
    reflect_cols(h_, r, 0, std::min(p + 4, hi + 1));
    reflect_cols(z_, r, 0, n);
    if (p > lo) {
      h_(p + 1, p - 1) = 0.0;
      h_(p + 2, p - 1) = 0.0;
    }
    x = h_(p + 1, p);
    y = h_(p + 2, p);
    if (p + 3 <= hi) z = h_(p + 3, p);
  }
  const double r = std::hypot(x, y);
  if (r != 0.0) {
    const double c = x / r, sn = y / r;
    rotate_rows(h_, hi - 1, hi, c, sn, hi - 2, n);
    rotate_cols(h_, hi - 1, hi, c, sn, 0, hi + 1);
    rotate_cols(z_, hi - 1, hi, c, sn, 0, n);
    h_(hi, hi - 2) = 0.0;
  }
}

std::vector<ComplexF> SchurIteration::deflated_values(std::size_t from) const {
  std::vector<ComplexF> out;
  const std::size_t n = h_.rows();
  for (std::size_t i = from; i < n; ++i) {
    if (i + 1 < n && h_(i + 1, i) != 0.0) {
      const TwoByTwo ev = eig2(h_(i, i), h_(i, i + 1), h_(i + 1, i), h_(i + 1, i + 1));
      out.push_back(ev.l1);
      out.push_back(ev.l2);
      ++i;
    } else {
      out.emplace_back(h_(i, i), 0.0);
    }
  }
  return out;
}

void SchurIteration::run(std::size_t max_sweeps) {
  const std::size_t n = h_.rows();
  std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;
  std::size_t since_deflation = 0;
  while (hi >= 0) {
    const auto uhi = static_cast<std::size_t>(hi);
    std::size_t lo = uhi;
    while (lo > 0) {
      if (negligible(lo)) {
        h_(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == uhi) {
      --hi;
      since_deflation = 0;
      continue;
    }
    if (lo + 1 == uhi) {
      standardize_block(lo);
      hi -= 2;
      since_deflation = 0;
      continue;
    }
    if (sweeps_ >= max_sweeps) throw NoConvergenceError(sweeps_, deflated_values(uhi + 1), h_);
    ++sweeps_;
    ++since_deflation;

    if (since_deflation == 10 || since_deflation == 20) {
      const double s = std::abs(h_(uhi, uhi - 1)) + std::abs(h_(uhi - 1, uhi - 2));
      const double h11 = 0.75 * s + h_(uhi, uhi);
      double_shift_sweep(lo, uhi, 2.0 * h11, h11 * h11 + 0.4375 * s * s);
      continue;
    }
    const double a = h_(uhi - 1, uhi - 1), b = h_(uhi - 1, uhi), c = h_(uhi, uhi - 1), d = h_(uhi, uhi);
    const TwoByTwo ev = eig2(a, b, c, d);
    if (ev.real) {
      const double l1 = ev.l1.real(), l2 = ev.l2.real();
      const double mu = std::abs(l1 - d) <= std::abs(l2 - d) ? l1 : l2;
      single_shift_sweep(lo, uhi, mu);
    } else {
      double_shift_sweep(lo, uhi, a + d, a * d - b * c);
    }
  }
}

bool eigen_order(const ComplexF& x, const ComplexF& y) {
  const double ax = std::abs(x), ay = std::abs(y);
  if (ax != ay) return ax > ay;
  if (x.real() != y.real()) return x.real() > y.real();
  return x.imag() > y.imag();
}

/// Solves (T − λI) y = 0 with y_k = 1 below index k by back substitution,
/// stepping over 2x2 blocks as small linear systems.
RealVector schur_eigenvector(const RealMatrix& t, std::size_t k, double lambda, double small) {
  const std::size_t n = t.rows();
  RealVector y(n, 0.0);
  y[k] = 1.0;
  auto guard = [&](double v) { return std::abs(v) < small ? (v < 0 ? -small : small) : v; };
  std::ptrdiff_t j = static_cast<std::ptrdiff_t>(k) - 1;
  while (j >= 0) {
    const auto uj = static_cast<std::size_t>(j);
    auto rhs = [&](std::size_t row) {
      double s = 0.0;
      for (std::size_t m = uj + 1; m <= k; ++m) s += t(row, m) * y[m];
      return -s;
    };
    if (uj > 0 && t(uj, uj - 1) != 0.0) {
      // 2x2 block at rows uj-1, uj.
      const std::size_t i0 = uj - 1;
      const double a = t(i0, i0) - lambda, b = t(i0, uj), c = t(uj, i0), d = t(uj, uj) - lambda;
      const double r0 = rhs(i0), r1 = rhs(uj);
      const double det = guard(a * d - b * c);
      y[i0] = (r0 * d - b * r1) / det;
      y[uj] = (a * r1 - c * r0) / det;
      j -= 2;
    } else {
      y[uj] = rhs(uj) / guard(t(uj, uj) - lambda);
      j -= 1;
    }
    // Rescale to avoid overflow on badly separated eigenvalues.
    const double big = *std::max_element(y.begin(), y.end(), [](double p, double q) { return std::abs(p) < std::abs(q); });
    if (std::abs(big) > 1e100) {
      for (auto& v : y) v /= std::abs(big);
    }
  }
  return y;
}

}  // namespace

EigenResult francis_qr_eigenvalues(const RealMatrix& a, const FrancisOptions& opts) {
  require_square_real(a, "eigenvalue iteration");
  const std::size_t n = a.rows();
  const double norm = std::max(a.max_abs(), DBL_MIN);
  HessenbergResult hr = hessenberg(a);
  SchurIteration it(std::move(hr.h), std::move(hr.q), norm);
  it.run(opts.max_sweeps.value_or(30 * n));

  EigenResult out{{}, {}, std::nullopt, it.sweeps(), std::move(it.h()), std::move(it.z())};

  // Diagonal positions of real eigenvalues, for the eigenvector pass.
  std::vector<std::pair<double, std::size_t>> real_at;
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < n && out.schur(i + 1, i) != 0.0) {
      const TwoByTwo ev = eig2(out.schur(i, i), out.schur(i, i + 1), out.schur(i + 1, i), out.schur(i + 1, i + 1));
      out.eigenvalues.push_back(ev.l1);
      out.eigenvalues.push_back(ev.l2);
      ++i;
    } else {
      out.eigenvalues.emplace_back(out.schur(i, i), 0.0);
      real_at.emplace_back(out.schur(i, i), i);
    }
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), eigen_order);

  const double group_tol = 1e-6 * std::max(1.0, a.max_abs());
  for (const ComplexF& l : out.eigenvalues) {
    auto g = std::find_if(out.distinct.begin(), out.distinct.end(),
                          [&](const EigenvalueGroup& e) { return std::abs(e.value - l) <= group_tol; });
    if (g == out.distinct.end()) {
      out.distinct.push_back({l, 1});
    } else {
      g->value = (g->value * static_cast<double>(g->multiplicity) + l) / static_cast<double>(g->multiplicity + 1);
      ++g->multiplicity;
    }
  }

  if (opts.compute_eigenvectors) {
    std::vector<EigenPair> pairs;
    const double small = DBL_EPSILON * norm;
    std::sort(real_at.begin(), real_at.end(),
              [](const auto& x, const auto& y) { return eigen_order({x.first, 0.0}, {y.first, 0.0}); });
    for (const auto& [lambda, k] : real_at) {
      RealVector v = out.z * schur_eigenvector(out.schur, k, lambda, small);
      const double nv = norm2(v);
      if (nv == 0.0 || !std::isfinite(nv)) continue;
      for (auto& x : v) x /= nv;
      RealVector r = a * v;
      for (std::size_t i = 0; i < n; ++i) r[i] -= lambda * v[i];
      const double res = norm2(r) / norm;
      if (res <= kEigenvectorResidualLimit) pairs.push_back({lambda, std::move(v), res});
    }
    out.eigenvectors = std::move(pairs);
  }
  return out;
}

std::vector<RationalVector> eigenvectors_for(const RationalMatrix& a, const Rational& lambda) {
  if (!a.is_square()) throw Error(ErrorCode::ShapeMismatch, "eigenvectors need a square matrix");
  const RationalMatrix shifted = a - lambda * RationalMatrix::identity(a.rows());
  EchelonOptions opts;
  opts.record_trace = false;
  auto basis = nullspace_basis(shifted, opts);
  if (basis.empty()) {
    throw Error(ErrorCode::EmptyEigenspace, lambda.str() + " is not an eigenvalue");
  }
  return basis;
}

std::vector<RealVector> eigenvectors_for(const RealMatrix& a, double lambda, const EchelonOptions& opts) {
  if (!a.is_square()) throw Error(ErrorCode::ShapeMismatch, "eigenvectors need a square matrix");
  const std::size_t n = a.rows();
  const RealMatrix shifted = a - lambda * RealMatrix::identity(n);
  EchelonOptions o = opts;
  o.record_trace = false;
  std::vector<RealVector> out;
  const double scale = std::max(a.max_abs(), DBL_MIN);
  for (RealVector v : nullspace_basis(shifted, o)) {
    const double nv = norm2(v);
    for (auto& x : v) x /= nv;
    RealVector r = a * v;
    for (std::size_t i = 0; i < n; ++i) r[i] -= lambda * v[i];
    if (norm2(r) <= kEigenvectorResidualLimit * scale) out.push_back(std::move(v));
  }
  if (out.empty()) {
    throw Error(ErrorCode::EmptyEigenspace, std::to_string(lambda) + " is not an eigenvalue at the working tolerance");
  }
  return out;
}

CharpolyCost charpoly_cost_demo(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  if (n > kMaxPermutationExpansionDim) {
    throw Error(ErrorCode::DimensionTooLarge, "refusing " + std::to_string(n) +
                                                  "! permutation terms; the direct expansion is capped at n = " +
                                                  std::to_string(kMaxPermutationExpansionDim));
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> d(-5, 5);
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = Rational(d(rng));

  using clock = std::chrono::steady_clock;
  CharpolyCost out;
  std::size_t reps = 0;
  const auto start = clock::now();
  std::chrono::duration<double> elapsed{};
  do {
    out.permutation_terms = permutation_expansion(m).terms;
    ++reps;
    elapsed = clock::now() - start;
  } while (elapsed < std::chrono::milliseconds(2));
  out.wallclock = elapsed / static_cast<double>(reps);
  return out;
}

}  // namespace matrixfirst
