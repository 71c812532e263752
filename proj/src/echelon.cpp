#include "matrixfirst/echelon.hpp"

#include <sstream>

namespace matrixfirst {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

template <Scalar T>
bool negligible(const T& x, double threshold) {
  if constexpr (is_exact_v<T>) {
    return x.is_zero();
  } else {
    return std::abs(x) <= threshold;
  }
}

/// Records ops while mutating the working matrix.
template <Scalar T>
class Recorder {
 public:
  Recorder(Matrix<T>& m, StepTrace<T>& trace, bool enabled)
      : m_(m), trace_(trace), enabled_(enabled) {}

  void apply(const RowOp<T>& op, std::string annotation) {
    apply_row_op(m_, op);
    if (enabled_) trace_.steps.push_back({op, std::move(annotation), m_});
  }

  /// Float-only hook: force entries known to be zero to exact zero before
  /// the snapshot is taken.
  template <class F>
  void apply(const RowOp<T>& op, std::string annotation, F&& fixup) {
    apply_row_op(m_, op);
    fixup(m_);
    if (enabled_) trace_.steps.push_back({op, std::move(annotation), m_});
  }

 private:
  Matrix<T>& m_;
  StepTrace<T>& trace_;
  bool enabled_;
};

std::string pos(std::size_t r, std::size_t c) {
  return "(" + std::to_string(r) + "," + std::to_string(c) + ")";
}

template <Scalar T>
std::size_t choose_pivot_row(const Matrix<T>& m, std::size_t col, std::size_t from,
                             PivotStrategy strategy, double threshold) {
  std::size_t best = m.rows();
  double best_mag = 0.0;
  T best_exact{};
  for (std::size_t i = from; i < m.rows(); ++i) {
    const T& x = m(i, col);
    if (negligible(x, threshold)) continue;
    if (strategy == PivotStrategy::FirstNonzero) return i;
    if constexpr (is_exact_v<T>) {
      const Rational mag = abs(x);
      if (best == m.rows() || mag > best_exact) {
        best = i;
        best_exact = mag;
      }
    } else {
      const double mag = std::abs(x);
      if (best == m.rows() || mag > best_mag) {
        best = i;
        best_mag = mag;
      }
    }
  }
  return best;
}

template <Scalar T>
std::vector<std::size_t> free_columns(std::size_t cols, const std::vector<Pivot>& pivots) {
  std::vector<bool> is_pivot(cols, false);
  for (const auto& p : pivots) is_pivot[p.col] = true;
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < cols; ++c)
    if (!is_pivot[c]) free.push_back(c);
  return free;
}

template <Scalar T>
void require_equal_lengths(const std::vector<Vector<T>>& vectors, std::size_t n) {
  for (const auto& v : vectors) {
    if (v.size() != n) throw Error(ErrorCode::ShapeMismatch, "vectors of unequal length");
  }
}

}  // namespace

template <Scalar T>
std::optional<std::string> row_op_violation(const RowOp<T>& op, std::size_t rows) {
  auto in_range = [rows](std::size_t i) { return i < rows; };
  return std::visit(
      Overloaded{
          [&](const SwapRows& s) -> std::optional<std::string> {
            if (!in_range(s.i) || !in_range(s.j)) return "row index out of range";
            if (s.i == s.j) return "swap needs two distinct rows";
            return std::nullopt;
          },
          [&](const ScaleRow<T>& s) -> std::optional<std::string> {
            if (!in_range(s.row)) return "row index out of range";
            if (s.factor == T(0)) return "scaling a row by zero is not an elementary operation";
            return std::nullopt;
          },
          [&](const AddMultiple<T>& a) -> std::optional<std::string> {
            if (!in_range(a.src) || !in_range(a.dst)) return "row index out of range";
            if (a.src == a.dst) return "source and destination rows must differ";
            return std::nullopt;
          },
      },
      op);
}

template <Scalar T>
void apply_row_op(Matrix<T>& m, const RowOp<T>& op) {
  if (auto why = row_op_violation(op, m.rows())) {
    throw Error(ErrorCode::IllegalRowOp, describe(op) + ": " + *why);
  }
  std::visit(Overloaded{
                 [&](const SwapRows& s) {
                   auto a = m.row(s.i);
                   auto b = m.row(s.j);
                   std::swap_ranges(a.begin(), a.end(), b.begin());
                 },
                 [&](const ScaleRow<T>& s) {
                   for (T& x : m.row(s.row)) x *= s.factor;
                 },
                 [&](const AddMultiple<T>& a) {
                   if (a.factor == T(0)) return;
                   auto src = m.row(a.src);
                   auto dst = m.row(a.dst);
                   for (std::size_t c = 0; c < m.cols(); ++c) dst[c] += a.factor * src[c];
                 },
             },
             op);
}

template <Scalar T>
std::string describe(const RowOp<T>& op) {
  return std::visit(Overloaded{
                        [](const SwapRows& s) {
                          return "Swap(" + std::to_string(s.i) + "," + std::to_string(s.j) + ")";
                        },
                        [](const ScaleRow<T>& s) {
                          return "Scale(" + std::to_string(s.row) + "," + scalar_text(s.factor) + ")";
                        },
                        [](const AddMultiple<T>& a) {
                          return "AddMultiple(" + std::to_string(a.src) + "," +
                                 scalar_text(a.factor) + "," + std::to_string(a.dst) + ")";
                        },
                    },
                    op);
}

template <Scalar T>
T det_effect(const RowOp<T>& op) {
  return std::visit(Overloaded{
                        [](const SwapRows&) { return T(-1); },
                        [](const ScaleRow<T>& s) { return s.factor; },
                        [](const AddMultiple<T>&) { return T(1); },
                    },
                    op);
}

template <Scalar T>
ReplayCheck verify_replay(const Matrix<T>& initial, const StepTrace<T>& trace) {
  Matrix<T> m = initial;
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const auto& step = trace.steps[k];
    if (row_op_violation(step.op, m.rows())) return {false, k};
    apply_row_op(m, step.op);
    if (!(m == step.after)) return {false, k};
  }
  return {};
}

template <Scalar T>
double zero_threshold(const Matrix<T>& a, const std::optional<double>& tol) {
  if constexpr (is_exact_v<T>) {
    return 0.0;
  } else {
    const double t = tol.value_or(kDefaultPivotTolerance);
    if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
    return t * std::max(1.0, a.max_abs());
  }
}

template <Scalar T>
RefResult<T> ref(const Matrix<T>& a, const EchelonOptions& opts) {
  const double thr = zero_threshold(a, opts.tol);
  Matrix<T> m = a;
  RefResult<T> out{a, std::nullopt, {}, {}, 0, {}, 0};
  Recorder<T> rec(m, out.trace, opts.record_trace);

  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    const std::size_t p = choose_pivot_row(m, c, r, opts.strategy, thr);
    if (p == m.rows()) {
      if constexpr (!is_exact_v<T>) {
        for (std::size_t i = r; i < m.rows(); ++i) m(i, c) = 0.0;
      }
      continue;
    }
    if (p != r) {
      rec.apply(SwapRows{r, p}, "exchange rows " + std::to_string(r) + " and " +
                                    std::to_string(p) + " to bring a pivot to " + pos(r, c));
      ++out.exchange_count;
    }
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (negligible(m(i, c), thr)) {
        if constexpr (!is_exact_v<T>) m(i, c) = 0.0;
        continue;
      }
      const T factor = -(m(i, c) / m(r, c));
      const std::string note = "eliminate below pivot " + pos(r, c);
      if constexpr (is_exact_v<T>) {
        rec.apply(AddMultiple<T>{r, factor, i}, note);
      } else {
        rec.apply(AddMultiple<T>{r, factor, i}, note, [&](Matrix<T>& w) { w(i, c) = 0.0; });
      }
    }
    out.pivots.push_back({r, c});
    ++r;
  }
  if constexpr (!is_exact_v<T>) {
    // Everything below the staircase is negligible by construction.
    for (std::size_t i = r; i < m.rows(); ++i)
      for (std::size_t c = 0; c < m.cols(); ++c)
        if (negligible(m(i, c), thr)) m(i, c) = 0.0;
  }
  out.ref = m;
  out.rank = out.pivots.size();
  out.free_cols = free_columns<T>(m.cols(), out.pivots);
  return out;
}

template <Scalar T>
RefResult<T> rref(const Matrix<T>& a, const EchelonOptions& opts) {
  RefResult<T> out = ref(a, opts);
  Matrix<T> m = out.ref;
  Recorder<T> rec(m, out.trace, opts.record_trace);
  for (auto it = out.pivots.rbegin(); it != out.pivots.rend(); ++it) {
    const auto [r, c] = *it;
    if (!(m(r, c) == T(1))) {
      const T inv = T(1) / m(r, c);
      const std::string note = "scale pivot " + pos(r, c) + " to 1";
      if constexpr (is_exact_v<T>) {
        rec.apply(ScaleRow<T>{r, inv}, note);
      } else {
        rec.apply(ScaleRow<T>{r, inv}, note, [&](Matrix<T>& w) { w(r, c) = 1.0; });
      }
    }
    for (std::size_t i = 0; i < r; ++i) {
      if (m(i, c) == T(0)) continue;
      const T factor = -m(i, c);
      const std::string note = "eliminate above pivot " + pos(r, c);
      if constexpr (is_exact_v<T>) {
        rec.apply(AddMultiple<T>{r, factor, i}, note);
      } else {
        rec.apply(AddMultiple<T>{r, factor, i}, note, [&](Matrix<T>& w) { w(i, c) = 0.0; });
      }
    }
  }
  out.rref = m;
  return out;
}

template <Scalar T>
bool is_ref(const Matrix<T>& a, double threshold) {
  std::optional<std::size_t> last_lead;
  bool seen_zero_row = false;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::optional<std::size_t> lead;
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (!negligible(a(i, c), threshold)) {
        lead = c;
        break;
      }
    }
    if (!lead) {
      seen_zero_row = true;
      continue;
    }
    if (seen_zero_row) return false;
    if (last_lead && *lead <= *last_lead) return false;
    last_lead = lead;
  }
  return true;
}

template <Scalar T>
bool is_rref(const Matrix<T>& a, double threshold) {
  if (!is_ref(a, threshold)) return false;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (negligible(a(i, c), threshold)) continue;
      if (!negligible(a(i, c) - T(1), threshold)) return false;
      for (std::size_t k = 0; k < a.rows(); ++k) {
        if (k != i && !negligible(a(k, c), threshold)) return false;
      }
      break;
    }
  }
  return true;
}

template <Scalar T>
std::size_t rank(const Matrix<T>& a, const EchelonOptions& opts) {
  EchelonOptions o = opts;
  o.record_trace = false;
  return ref(a, o).rank;
}

template <Scalar T>
Solution<T> solve(const Matrix<T>& a, const Vector<T>& b, const EchelonOptions& opts) {
  if (b.size() != a.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "right-hand side has length " + std::to_string(b.size()) +
                                              ", expected " + std::to_string(a.rows()));
  }
  const std::size_t n = a.cols();
  Matrix<T> aug(a.rows(), n + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = b[i];
  }
  EchelonOptions o = opts;
  o.record_trace = false;
  const RefResult<T> red = rref(aug, o);
  const Matrix<T>& r = *red.rref;
  for (const auto& p : red.pivots) {
    if (p.col == n) return InconsistentSystem{p.row};
  }
  Vector<T> x(n, T(0));
  for (const auto& p : red.pivots) x[p.col] = r(p.row, n);
  std::vector<Vector<T>> null;
  for (std::size_t f : red.free_cols) {
    if (f == n) continue;
    Vector<T> v(n, T(0));
    v[f] = T(1);
    for (const auto& p : red.pivots) v[p.col] = -r(p.row, f);
    null.push_back(std::move(v));
  }
  if (null.empty()) return UniqueSolution<T>{std::move(x)};
  return ParametricSolution<T>{std::move(x), std::move(null)};
}

template <Scalar T>
std::vector<Vector<T>> nullspace_basis(const Matrix<T>& a, const EchelonOptions& opts) {
  EchelonOptions o = opts;
  o.record_trace = false;
  const RefResult<T> red = rref(a, o);
  const Matrix<T>& r = *red.rref;
  std::vector<Vector<T>> out;
  for (std::size_t f : red.free_cols) {
    Vector<T> v(a.cols(), T(0));
    v[f] = T(1);
    for (const auto& p : red.pivots) v[p.col] = -r(p.row, f);
    out.push_back(std::move(v));
  }
  return out;
}

template <Scalar T>
IndependenceResult<T> is_independent(const std::vector<Vector<T>>& vectors,
                                     const EchelonOptions& opts) {
  if (vectors.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one vector");
  const Matrix<T> a = Matrix<T>::from_columns(vectors);
  EchelonOptions o = opts;
  o.record_trace = false;
  const RefResult<T> red = ref(a, o);
  IndependenceResult<T> out;
  out.rank = red.rank;
  out.independent = red.free_cols.empty();
  if (out.independent) return out;

  const std::size_t ell = red.free_cols.front();
  Dependency<T> dep{ell, {}};
  if (ell > 0) {
    // Columns before the first free column are all pivot columns, so the
    // system has exactly one solution.
    const Matrix<T> head = a.block(0, 0, a.rows(), ell);
    const auto sol = solve(head, vectors[ell], o);
    dep.coefficients = std::get<UniqueSolution<T>>(sol).x;
  }
  out.dependency = std::move(dep);
  return out;
}

template <Scalar T>
SpanMembership<T> in_span(const Vector<T>& v, const std::vector<Vector<T>>& spanning,
                          const EchelonOptions& opts) {
  require_equal_lengths(spanning, v.size());
  if (spanning.empty()) {
    if (is_zero_vector(v)) return {true, Vector<T>{}};
    return {false, std::nullopt};
  }
  const auto sol = solve(Matrix<T>::from_columns(spanning), v, opts);
  if (const auto* u = std::get_if<UniqueSolution<T>>(&sol)) return {true, u->x};
  if (const auto* p = std::get_if<ParametricSolution<T>>(&sol)) return {true, p->particular};
  return {false, std::nullopt};
}

template <Scalar T>
bool span_equals(const std::vector<Vector<T>>& u, const std::vector<Vector<T>>& w,
                 const EchelonOptions& opts) {
  std::optional<std::size_t> n;
  for (const auto* set : {&u, &w}) {
    for (const auto& v : *set) {
      if (n && v.size() != *n) throw Error(ErrorCode::ShapeMismatch, "vectors of unequal length");
      n = v.size();
    }
  }
  for (const auto& x : u)
    if (!in_span(x, w, opts).member) return false;
  for (const auto& x : w)
    if (!in_span(x, u, opts).member) return false;
  return true;
}

template <Scalar T>
std::size_t span_dimension(const std::vector<Vector<T>>& vectors, const EchelonOptions& opts) {
  if (vectors.empty()) return 0;
  return rank(Matrix<T>::from_columns(vectors), opts);
}

template <Scalar T>
SizeBoundResult<T> independence_size_bound(const std::vector<Vector<T>>& spanning,
                                           const std::vector<Vector<T>>& s,
                                           const EchelonOptions& opts) {
  if (s.empty()) throw Error(ErrorCode::InvalidArgument, "the set S is empty");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!spanning.empty() && s[i].size() != spanning.front().size()) {
      throw Error(ErrorCode::ShapeMismatch, "vectors of unequal length");
    }
    if (!in_span(s[i], spanning, opts).member) {
      throw Error(ErrorCode::NotInSpan,
                  "vector " + std::to_string(i) + " of S is not in the span of the spanning set");
    }
  }
  SizeBoundResult<T> out;
  out.spanning_count = spanning.size();
  out.set_size = s.size();
  out.dimension = span_dimension(spanning, opts);
  out.forced_dependent = out.set_size > out.dimension;

  std::ostringstream cert;
  const auto m = out.set_size, ell = out.spanning_count, k = out.dimension;
  if (out.forced_dependent) {
    if (m > ell) {
      cert << "m = " << m << " > l = " << ell << " >= dim(W) = k = " << k;
    } else {
      cert << "m = " << m << " > dim(W) = k = " << k << " (l = " << ell << ")";
    }
    cert << ": the REF of S has at most " << k << " pivots, so S is dependent";
    out.dependency = is_independent(s, opts).dependency;
  } else {
    cert << "m = " << m << " <= dim(W) = k = " << k << ": bound not triggered";
  }
  out.certificate = cert.str();
  return out;
}

std::string_view to_string(BasisReason reason) {
  switch (reason) {
    case BasisReason::IndependentHenceSpanning: return "independent_hence_spanning";
    case BasisReason::SpanningHenceIndependent: return "spanning_hence_independent";
    case BasisReason::Fails: return "fails";
  }
  return "fails";
}

template <Scalar T>
BasisCheck basis_check(const std::vector<Vector<T>>& vectors, std::size_t expected_dim,
                       const std::optional<std::vector<Vector<T>>>& subspace,
                       const EchelonOptions& opts) {
  BasisCheck out;
  out.count = vectors.size();
  out.expected_dim = expected_dim;
  if (!vectors.empty()) require_equal_lengths(vectors, vectors.front().size());
  out.rank = span_dimension(vectors, opts);
  out.duality_holds = out.rank == out.count && out.count == expected_dim;

  if (out.count != expected_dim) {
    out.note = out.count < expected_dim ? "too few vectors for the dimension"
                                        : "too many vectors for the dimension";
    return out;
  }
  if (!vectors.empty() && expected_dim > vectors.front().size()) {
    out.note = "dimension exceeds the ambient space";
    return out;
  }

  if (subspace) {
    const std::size_t sub_dim = span_dimension(*subspace, opts);
    bool contained = true;
    for (const auto& v : vectors) contained = contained && in_span(v, *subspace, opts).member;
    bool spans = true;
    for (const auto& w : *subspace) spans = spans && in_span(w, vectors, opts).member;
    if (!contained) {
      out.note = "some vector lies outside the subspace";
    } else if (sub_dim != expected_dim) {
      out.note = "subspace has dimension " + std::to_string(sub_dim);
    } else if (!spans) {
      out.note = "vectors do not span the subspace";
    } else {
      out.is_basis = out.rank == out.count;
      out.reason = out.is_basis ? BasisReason::SpanningHenceIndependent : BasisReason::Fails;
      out.note = "k spanning vectors of a k-dimensional subspace; REF has " +
                 std::to_string(out.rank) + " pivots";
    }
    return out;
  }

  if (out.rank == out.count) {
    out.is_basis = true;
    out.reason = BasisReason::IndependentHenceSpanning;
    out.note = "k independent vectors; REF has " + std::to_string(out.rank) + " pivots";
  } else {
    out.note = "vectors are dependent: rank " + std::to_string(out.rank) + " < " +
               std::to_string(out.count);
  }
  return out;
}

#define MATRIXFIRST_INSTANTIATE(T)                                                              \
  template std::optional<std::string> row_op_violation<T>(const RowOp<T>&, std::size_t);       \
  template void apply_row_op<T>(Matrix<T>&, const RowOp<T>&);                                   \
  template std::string describe<T>(const RowOp<T>&);                                            \
  template T det_effect<T>(const RowOp<T>&);                                                    \
  template ReplayCheck verify_replay<T>(const Matrix<T>&, const StepTrace<T>&);                 \
  template double zero_threshold<T>(const Matrix<T>&, const std::optional<double>&);            \
  template RefResult<T> ref<T>(const Matrix<T>&, const EchelonOptions&);                        \
  template RefResult<T> rref<T>(const Matrix<T>&, const EchelonOptions&);                       \
  template bool is_ref<T>(const Matrix<T>&, double);                                            \
  template bool is_rref<T>(const Matrix<T>&, double);                                           \
  template std::size_t rank<T>(const Matrix<T>&, const EchelonOptions&);                        \
  template Solution<T> solve<T>(const Matrix<T>&, const Vector<T>&, const EchelonOptions&);     \
  template std::vector<Vector<T>> nullspace_basis<T>(const Matrix<T>&, const EchelonOptions&);  \
  template IndependenceResult<T> is_independent<T>(const std::vector<Vector<T>>&,               \
                                                   const EchelonOptions&);                      \
  template SpanMembership<T> in_span<T>(const Vector<T>&, const std::vector<Vector<T>>&,        \
                                        const EchelonOptions&);                                 \
  template bool span_equals<T>(const std::vector<Vector<T>>&, const std::vector<Vector<T>>&,    \
                               const EchelonOptions&);                                          \
  template std::size_t span_dimension<T>(const std::vector<Vector<T>>&, const EchelonOptions&); \
  template SizeBoundResult<T> independence_size_bound<T>(                                       \
      const std::vector<Vector<T>>&, const std::vector<Vector<T>>&, const EchelonOptions&);     \
  template BasisCheck basis_check<T>(const std::vector<Vector<T>>&, std::size_t,                \
                                     const std::optional<std::vector<Vector<T>>>&,              \
                                     const EchelonOptions&);

MATRIXFIRST_INSTANTIATE(Rational)
MATRIXFIRST_INSTANTIATE(double)

#undef MATRIXFIRST_INSTANTIATE

}  // namespace matrixfirst
