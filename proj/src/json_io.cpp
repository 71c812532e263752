#include "matrixfirst/json_io.hpp"

#include <charconv>
#include <cmath>

namespace matrixfirst {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_real_token(std::string_view token) {
  token = trim(token);
  if (token.find('/') != std::string_view::npos) return Rational::parse(token).to_double();
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || end != token.data() + token.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::Parse, "not a number: '" + std::string(token) + "'");
  }
  return v;
}

Error json_error(const std::string& what) { return Error(ErrorCode::Parse, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw json_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::size_t index_from_json(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw json_error(std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

template <class T, class F>
std::vector<T> list_from_json(const Json& j, F&& each) {
  if (!j.is_array()) throw json_error("expected a JSON array");
  std::vector<T> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(each(e));
  return out;
}

template <Scalar T>
Matrix<T> rows_from_json(const Json& data) {
  if (!data.is_array() || data.empty()) throw json_error("matrix data must be a non-empty array of rows");
  std::vector<Vector<T>> rows;
  for (const auto& r : data) rows.push_back(vector_from_json<T>(r));
  return Matrix<T>::from_rows(rows);
}

}  // namespace

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_unsigned()) return Rational::parse(std::to_string(j.get<unsigned long long>()));
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isfinite(v) && v == std::trunc(v) && std::abs(v) < 9.0e15) return Rational(static_cast<long>(v));
    throw json_error("non-integer number " + j.dump() + " in exact mode; use a \"p/q\" string or float mode");
  }
  throw json_error("expected a rational, got " + j.dump());
}

double real_from_json(const Json& j) {
  if (j.is_number()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw json_error("non-finite number");
    return v;
  }
  if (j.is_string()) return parse_real_token(j.get<std::string>());
  throw json_error("expected a number, got " + j.dump());
}

template <Scalar T>
Vector<T> vector_from_json(const Json& j) {
  return list_from_json<T>(j, [](const Json& e) { return scalar_from_json<T>(e); });
}

template <Scalar T>
Matrix<T> matrix_from_json_as(const Json& j) {
  if (j.is_array()) return rows_from_json<T>(j);
  Matrix<T> m = rows_from_json<T>(field(j, "data"));
  if (j.contains("rows") && j.at("rows") != m.rows()) throw json_error("'rows' does not match data");
  if (j.contains("cols") && j.at("cols") != m.cols()) throw json_error("'cols' does not match data");
  return m;
}

AnyMatrix matrix_from_json(const Json& j, bool as_float) {
  if (as_float) return matrix_from_json_as<double>(j);
  return matrix_from_json_as<Rational>(j);
}

AnyMatrix parse_matrix_csv(std::string_view text, bool as_float) {
  std::vector<std::vector<std::string_view>> cells;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> row;
    while (true) {
      const auto comma = line.find(',');
      row.push_back(trim(line.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    cells.push_back(std::move(row));
  }
  if (cells.empty()) throw json_error("empty matrix text");
  const std::size_t cols = cells.front().size();
  for (const auto& r : cells) {
    if (r.size() != cols) throw Error(ErrorCode::Parse, "ragged CSV rows");
  }
  auto build = [&]<class T>(auto&& token) {
    Matrix<T> m(cells.size(), cols);
    for (std::size_t i = 0; i < cells.size(); ++i)
      for (std::size_t k = 0; k < cols; ++k) m(i, k) = token(cells[i][k]);
    return m;
  };
  if (as_float) return build.template operator()<double>(parse_real_token);
  return build.template operator()<Rational>([](std::string_view t) { return Rational::parse(t); });
}

AnyMatrix parse_matrix_text(std::string_view text, bool as_float) {
  const std::string_view t = trim(text);
  if (!t.empty() && (t.front() == '{' || t.front() == '[')) {
    Json j;
    try {
      j = Json::parse(t);
    } catch (const Json::parse_error& e) {
      throw json_error(std::string("malformed JSON: ") + e.what());
    }
    return matrix_from_json(j, as_float);
  }
  return parse_matrix_csv(t, as_float);
}

Json to_json(const Rational& x) { return x.str(); }
Json to_json(double x) { return x; }

template <Scalar T>
Json to_json(const Vector<T>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

template <Scalar T>
Json rows_json(const Matrix<T>& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    out.push_back(to_json(Vector<T>(r.begin(), r.end())));
  }
  return out;
}

template <Scalar T>
Json to_json(const Matrix<T>& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", rows_json(m)}};
}

Json to_json(const AnyMatrix& m) {
  return std::visit([](const auto& x) { return to_json(x); }, m);
}

template <Scalar T>
Json to_json(const RowOp<T>& op) {
  return std::visit(
      [](const auto& o) -> Json {
        using O = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<O, SwapRows>) {
          return {{"kind", "Swap"}, {"i", o.i}, {"j", o.j}};
        } else if constexpr (std::is_same_v<O, ScaleRow<T>>) {
          return {{"kind", "Scale"}, {"row", o.row}, {"factor", to_json(o.factor)}};
        } else {
          return {{"kind", "AddMultiple"}, {"src", o.src}, {"factor", to_json(o.factor)}, {"dst", o.dst}};
        }
      },
      op);
}

template <Scalar T>
RowOp<T> row_op_from_json(const Json& j) {
  const Json& kind = field(j, "kind");
  if (!kind.is_string()) throw json_error("op 'kind' must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "Swap") return SwapRows{index_from_json(j, "i"), index_from_json(j, "j")};
  if (k == "Scale") return ScaleRow<T>{index_from_json(j, "row"), scalar_from_json<T>(field(j, "factor"))};
  if (k == "AddMultiple") {
    return AddMultiple<T>{index_from_json(j, "src"), scalar_from_json<T>(field(j, "factor")), index_from_json(j, "dst")};
  }
  throw json_error("unknown op kind '" + k + "'");
}

template <Scalar T>
Json to_json(const StepTrace<T>& trace) {
  Json steps = Json::array();
  for (const auto& s : trace.steps) {
    steps.push_back({{"op", to_json<T>(s.op)}, {"annotation", s.annotation}, {"after", rows_json(s.after)}});
  }
  return {{"steps", std::move(steps)}};
}

template <Scalar T>
StepTrace<T> step_trace_from_json(const Json& j) {
  StepTrace<T> out;
  for (const auto& s : field(j, "steps")) {
    const Json& ann = field(s, "annotation");
    out.steps.push_back({row_op_from_json<T>(field(s, "op")), ann.is_string() ? ann.get<std::string>() : "",
                         rows_from_json<T>(field(s, "after"))});
  }
  return out;
}

template <Scalar T>
Json to_json(const RefResult<T>& r, bool with_trace) {
  Json pivots = Json::array();
  for (const auto& p : r.pivots) pivots.push_back({p.row, p.col});
  Json out{{"ref", to_json(r.ref)},
           {"pivots", std::move(pivots)},
           {"free_cols", r.free_cols},
           {"rank", r.rank},
           {"exchange_count", r.exchange_count}};
  if (r.rref) out["rref"] = to_json(*r.rref);
  if (with_trace) out["trace"] = to_json(r.trace);
  return out;
}

template <Scalar T>
RefResult<T> ref_result_from_json(const Json& j) {
  RefResult<T> r{matrix_from_json_as<T>(field(j, "ref")), std::nullopt, {}, {}, 0, {}, 0};
  if (j.contains("rref")) r.rref = matrix_from_json_as<T>(j.at("rref"));
  for (const auto& p : field(j, "pivots")) {
    if (!p.is_array() || p.size() != 2) throw json_error("pivot must be [row, col]");
    r.pivots.push_back({p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>()});
  }
  r.free_cols = field(j, "free_cols").get<std::vector<std::size_t>>();
  r.rank = index_from_json(j, "rank");
  r.exchange_count = index_from_json(j, "exchange_count");
  if (j.contains("trace")) r.trace = step_trace_from_json<T>(j.at("trace"));
  return r;
}

template <Scalar T>
Json to_json(const Solution<T>& s) {
  return std::visit(
      [](const auto& v) -> Json {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, UniqueSolution<T>>) {
          return {{"kind", "unique"}, {"x", to_json(v.x)}};
        } else if constexpr (std::is_same_v<V, ParametricSolution<T>>) {
          Json ns = Json::array();
          for (const auto& n : v.nullspace) ns.push_back(to_json(n));
          return {{"kind", "parametric"}, {"particular", to_json(v.particular)}, {"nullspace", std::move(ns)}};
        } else {
          return {{"kind", "inconsistent"}, {"witness_row", v.witness_row}};
        }
      },
      s);
}

template <Scalar T>
Solution<T> solution_from_json(const Json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "unique") return UniqueSolution<T>{vector_from_json<T>(field(j, "x"))};
  if (kind == "parametric") {
    return ParametricSolution<T>{vector_from_json<T>(field(j, "particular")),
                                 list_from_json<Vector<T>>(field(j, "nullspace"),
                                                           [](const Json& e) { return vector_from_json<T>(e); })};
  }
  if (kind == "inconsistent") return InconsistentSystem{index_from_json(j, "witness_row")};
  throw json_error("unknown solution kind '" + kind + "'");
}

template <Scalar T>
Json to_json(const LuFactors<T>& f, bool with_trace) {
  Json out{{"L", to_json(f.l)}, {"R", to_json(f.r)}, {"perm", f.perm}, {"ex", f.exchange_count}};
  if (with_trace) out["trace"] = to_json(f.trace);
  return out;
}

template <Scalar T>
LuFactors<T> lu_factors_from_json(const Json& j) {
  LuFactors<T> f{matrix_from_json_as<T>(field(j, "L")), matrix_from_json_as<T>(field(j, "R")),
                 field(j, "perm").get<std::vector<std::size_t>>(), index_from_json(j, "ex"), {}};
  if (j.contains("trace")) f.trace = step_trace_from_json<T>(j.at("trace"));
  return f;
}

Json to_json(const QrFactors& f) {
  Json refl = Json::array();
  for (const auto& h : f.reflectors) refl.push_back({{"offset", h.offset}, {"v", h.v}, {"beta", h.beta}});
  return {{"Q", to_json(f.q)}, {"R", to_json(f.r)}, {"reflectors", std::move(refl)}};
}

QrFactors qr_factors_from_json(const Json& j) {
  QrFactors f{matrix_from_json_as<double>(field(j, "Q")), matrix_from_json_as<double>(field(j, "R")), {}};
  for (const auto& h : field(j, "reflectors")) {
    f.reflectors.push_back({index_from_json(h, "offset"), vector_from_json<double>(field(h, "v")),
                            real_from_json(field(h, "beta"))});
  }
  return f;
}

Json to_json(const Polynomial& p) {
  Json coeffs = Json::array();
  for (const auto& c : p.coefficients()) coeffs.push_back(to_json(c));
  return {{"text", p.str()}, {"coefficients", std::move(coeffs)}};
}

Polynomial polynomial_from_json(const Json& j) {
  return Polynomial(vector_from_json<Rational>(field(j, "coefficients")));
}

Json to_json(const KrylovResult& k) {
  Json it = Json::array();
  for (const auto& v : k.iterates) it.push_back(to_json(v));
  return {{"iterates", std::move(it)}, {"dependency", to_json(k.dependency)}, {"annihilator", to_json(k.annihilator)}};
}

KrylovResult krylov_result_from_json(const Json& j) {
  return {list_from_json<RationalVector>(field(j, "iterates"),
                                         [](const Json& e) { return vector_from_json<Rational>(e); }),
          vector_from_json<Rational>(field(j, "dependency")), polynomial_from_json(field(j, "annihilator"))};
}

EigenReport eigen_report(const EigenResult& r) {
  EigenReport out{r.distinct, {}, {}, r.iterations_used};
  if (r.eigenvectors) {
    out.eigenvectors = *r.eigenvectors;
    for (const auto& e : *r.eigenvectors) out.residuals.push_back(e.residual);
  }
  return out;
}

bool operator==(const EigenReport& a, const EigenReport& b) {
  if (a.eigenvalues.size() != b.eigenvalues.size() || a.eigenvectors.size() != b.eigenvectors.size()) return false;
  for (std::size_t i = 0; i < a.eigenvalues.size(); ++i) {
    if (a.eigenvalues[i].value != b.eigenvalues[i].value ||
        a.eigenvalues[i].multiplicity != b.eigenvalues[i].multiplicity)
      return false;
  }
  for (std::size_t i = 0; i < a.eigenvectors.size(); ++i) {
    const auto &x = a.eigenvectors[i], &y = b.eigenvectors[i];
    if (x.value != y.value || x.vector != y.vector || x.residual != y.residual) return false;
  }
  return a.residuals == b.residuals && a.iterations == b.iterations;
}

Json to_json(const EigenResult& r) {
  const EigenReport rep = eigen_report(r);
  Json vals = Json::array();
  for (const auto& g : rep.eigenvalues) {
    vals.push_back({{"re", g.value.real()}, {"im", g.value.imag()}, {"mult", g.multiplicity}});
  }
  Json vecs = Json::array();
  for (const auto& e : rep.eigenvectors) {
    vecs.push_back({{"value", e.value}, {"vector", e.vector}, {"residual", e.residual}});
  }
  return {{"eigenvalues", std::move(vals)},
          {"residuals", rep.residuals},
          {"eigenvectors", std::move(vecs)},
          {"iterations", rep.iterations}};
}

EigenReport eigen_report_from_json(const Json& j) {
  EigenReport out;
  for (const auto& v : field(j, "eigenvalues")) {
    out.eigenvalues.push_back({{real_from_json(field(v, "re")), real_from_json(field(v, "im"))}, index_from_json(v, "mult")});
  }
  out.residuals = vector_from_json<double>(field(j, "residuals"));
  if (j.contains("eigenvectors")) {
    for (const auto& e : j.at("eigenvectors")) {
      out.eigenvectors.push_back(
          {real_from_json(field(e, "value")), vector_from_json<double>(field(e, "vector")), real_from_json(field(e, "residual"))});
    }
  }
  if (j.contains("iterations")) out.iterations = index_from_json(j, "iterations");
  return out;
}

Json to_json(const LeastSquaresResult& r) { return {{"x", r.x}, {"residual_norm", r.residual_norm}}; }

LeastSquaresResult least_squares_from_json(const Json& j) {
  return {vector_from_json<double>(field(j, "x")), real_from_json(field(j, "residual_norm"))};
}

Json to_json(const GramSchmidtComparison& c) {
  return {{"classical_deviation", c.classical_deviation},
          {"householder_deviation", c.householder_deviation},
          {"ratio", c.ratio}};
}

GramSchmidtComparison gs_comparison_from_json(const Json& j) {
  return {real_from_json(field(j, "classical_deviation")), real_from_json(field(j, "householder_deviation")),
          real_from_json(field(j, "ratio"))};
}

Json to_json(const BasisCheck& c) {
  return {{"is_basis", c.is_basis}, {"reason", std::string(to_string(c.reason))}, {"rank", c.rank},
          {"count", c.count},       {"expected_dim", c.expected_dim},              {"duality_holds", c.duality_holds},
          {"note", c.note}};
}

BasisCheck basis_check_from_json(const Json& j) {
  BasisCheck c;
  c.is_basis = field(j, "is_basis").get<bool>();
  const std::string reason = field(j, "reason").get<std::string>();
  bool known = false;
  for (BasisReason r : {BasisReason::IndependentHenceSpanning, BasisReason::SpanningHenceIndependent, BasisReason::Fails}) {
    if (to_string(r) == reason) {
      c.reason = r;
      known = true;
    }
  }
  if (!known) throw json_error("unknown basis reason '" + reason + "'");
  c.rank = index_from_json(j, "rank");
  c.count = index_from_json(j, "count");
  c.expected_dim = index_from_json(j, "expected_dim");
  c.duality_holds = field(j, "duality_holds").get<bool>();
  c.note = field(j, "note").get<std::string>();
  return c;
}

#define MATRIXFIRST_INSTANTIATE(T)                                          \
  template Vector<T> vector_from_json<T>(const Json&);                      \
  template Matrix<T> matrix_from_json_as<T>(const Json&);                   \
  template Json to_json<T>(const Vector<T>&);                               \
  template Json to_json<T>(const Matrix<T>&);                               \
  template Json rows_json<T>(const Matrix<T>&);                             \
  template Json to_json<T>(const RowOp<T>&);                                \
  template RowOp<T> row_op_from_json<T>(const Json&);                       \
  template Json to_json<T>(const StepTrace<T>&);                            \
  template StepTrace<T> step_trace_from_json<T>(const Json&);               \
  template Json to_json<T>(const RefResult<T>&, bool);                      \
  template RefResult<T> ref_result_from_json<T>(const Json&);               \
  template Json to_json<T>(const Solution<T>&);                             \
  template Solution<T> solution_from_json<T>(const Json&);                  \
  template Json to_json<T>(const LuFactors<T>&, bool);                      \
  template LuFactors<T> lu_factors_from_json<T>(const Json&);

MATRIXFIRST_INSTANTIATE(Rational)
MATRIXFIRST_INSTANTIATE(double)

#undef MATRIXFIRST_INSTANTIATE

}  // namespace matrixfirst
