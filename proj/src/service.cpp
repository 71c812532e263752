#include "matrixfirst/service.hpp"

#include <cmath>

#include "matrixfirst/basis.hpp"
#include "matrixfirst/eigen.hpp"
#include "matrixfirst/factor.hpp"

namespace matrixfirst {

namespace {

const Json& args_of(const Json& req) {
  static const Json empty = Json::object();
  if (!req.is_object()) throw Error(ErrorCode::InvalidArgument, "request body must be a JSON object");
  if (!req.contains("args") || req.at("args").is_null()) return empty;
  const Json& a = req.at("args");
  if (!a.is_object()) throw Error(ErrorCode::InvalidArgument, "\"args\" must be an object");
  return a;
}

bool flag(const Json& args, const char* key) { return args.contains(key) && args.at(key).get<bool>(); }

AnyMatrix matrix_field(const Json& holder, const char* key, bool as_float) {
  if (!holder.contains(key)) throw Error(ErrorCode::InvalidArgument, std::string("missing \"") + key + "\"");
  const Json& m = holder.at(key);
  if (m.is_string()) return parse_matrix_text(m.get<std::string>(), as_float);
  return matrix_from_json(m, as_float);
}

template <Scalar T>
Matrix<T> as(const AnyMatrix& m) {
  if constexpr (is_exact_v<T>) {
    if (!std::holds_alternative<RationalMatrix>(m))
      throw Error(ErrorCode::DomainMismatch, "this operation needs exact rational entries");
    return std::get<RationalMatrix>(m);
  } else {
    if (const auto* exact = std::get_if<RationalMatrix>(&m)) return to_real(*exact);
    return std::get<RealMatrix>(m);
  }
}

template <Scalar T>
Vector<T> vector_arg(const Json& args, const char* key) {
  if (!args.contains(key)) throw Error(ErrorCode::InvalidArgument, std::string("missing args.") + key);
  const Json& v = args.at(key);
  if (v.is_string()) {
    const AnyMatrix m = parse_matrix_text(v.get<std::string>(), !is_exact_v<T>);
    const Matrix<T> col = std::get<Matrix<T>>(m);
    if (col.cols() == 1) return col.column(0);
    if (col.rows() == 1) return Vector<T>(col.row(0).begin(), col.row(0).end());
    throw Error(ErrorCode::ShapeMismatch, std::string("args.") + key + " must be a single row or column");
  }
  return vector_from_json<T>(v);
}

template <Scalar T>
EchelonOptions echelon_options(const Json& args) {
  EchelonOptions o = default_echelon_options<T>();
  if (args.contains("strategy")) {
    const auto s = args.at("strategy").get<std::string>();
    if (s == "first_nonzero") {
      o.strategy = PivotStrategy::FirstNonzero;
    } else if (s == "partial") {
      o.strategy = PivotStrategy::PartialPivot;
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown strategy '" + s + "' (first_nonzero, partial)");
    }
  }
  if (args.contains("tol") && !args.at("tol").is_null()) {
    const double tol = args.at("tol").get<double>();
    if (!(tol > 0.0) || !std::isfinite(tol)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
    o.tol = tol;
  }
  o.record_trace = flag(args, "trace");
  return o;
}

std::optional<LuPivoting> lu_pivoting(const Json& args) {
  if (!args.contains("pivoting")) return std::nullopt;
  const auto s = args.at("pivoting").get<std::string>();
  if (s == "none") return LuPivoting::None;
  if (s == "first_nonzero") return LuPivoting::FirstNonzero;
  if (s == "partial") return LuPivoting::Partial;
  throw Error(ErrorCode::InvalidArgument, "unknown pivoting '" + s + "' (none, first_nonzero, partial)");
}

template <Scalar T>
Json typed_op(std::string_view op, const Matrix<T>& a, const Json& args) {
  const bool trace = flag(args, "trace");
  if (op == "ref") return to_json(ref(a, echelon_options<T>(args)), trace);
  if (op == "rref") return to_json(rref(a, echelon_options<T>(args)), trace);
  if (op == "solve") {
    const Vector<T> b = vector_arg<T>(args, "rhs");
    Json out = to_json(solve(a, b, echelon_options<T>(args)));
    if (trace && b.size() == a.rows()) {
      Matrix<T> aug(a.rows(), a.cols() + 1);
      for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
      }
      out["trace"] = to_json(rref(aug, echelon_options<T>(args)).trace);
    }
    return out;
  }
  if (op == "inv") {
    const auto r = invert_traced(a, echelon_options<T>(args));
    Json out{{"inverse", to_json(r.inverse)}};
    if (trace) out["trace"] = to_json(r.trace);
    return out;
  }
  if (op == "lu") return to_json(lu(a, lu_pivoting(args)), trace);
  if (op == "det") {
    const std::string method = args.value("method", std::string("lu"));
    if (method == "lu") return {{"det", to_json(det_via_lu(a))}, {"method", "lu"}};
    if (method == "permutation") {
      const auto e = permutation_expansion(a);
      return {{"det", to_json(e.value)}, {"method", "permutation"}, {"terms", e.terms}};
    }
    throw Error(ErrorCode::InvalidArgument, "unknown det method '" + method + "' (lu, permutation)");
  }
  if (op == "basis-check") {
    const std::size_t dim = args.contains("dim") ? args.at("dim").get<std::size_t>() : a.rows();
    std::optional<std::vector<Vector<T>>> subspace;
    if (args.contains("subspace")) subspace = as<T>(matrix_field(args, "subspace", !is_exact_v<T>)).columns();
    return to_json(basis_check(a.columns(), dim, subspace, echelon_options<T>(args)));
  }
  if (op == "change-basis") {
    const auto basis = BasisSet<T>::from_matrix(as<T>(matrix_field(args, "basis", !is_exact_v<T>)));
    Json out{{"matrix", to_json(change_of_basis(a, basis))}};
    if (args.contains("vector")) out["coordinates"] = to_json(coordinates_in_basis(vector_arg<T>(args, "vector"), basis));
    return out;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown operation '" + std::string(op) + "'");
}

Json eig_op(const AnyMatrix& m, const Json& args) {
  FrancisOptions fo;
  if (args.contains("max_sweeps")) fo.max_sweeps = args.at("max_sweeps").get<std::size_t>();
  if (args.contains("eigenvectors")) fo.compute_eigenvectors = args.at("eigenvectors").get<bool>();
  const RealMatrix a = as<double>(m);
  const EigenResult r = francis_qr_eigenvalues(a, fo);
  Json out = to_json(r);
  if (const auto* exact = std::get_if<RationalMatrix>(&m)) {
    // Cross-domain certificate: each numeric eigenvalue must be a root of the
    // exact minimal polynomial.
    const Polynomial p = minimal_polynomial(*exact);
    const double deg = static_cast<double>(p.degree());
    Json cert = Json::array();
    bool ok = true;
    for (const auto& g : r.distinct) {
      const double res = std::abs(p(g.value));
      const double bound = 1e-8 * std::pow(1.0 + std::abs(g.value), deg);
      ok = ok && res <= bound;
      cert.push_back({{"re", g.value.real()}, {"im", g.value.imag()}, {"residual", res}, {"bound", bound}});
    }
    out["minpoly"] = p.str();
    out["minpoly_coefficients"] = to_json(p).at("coefficients");
    out["minpoly_residuals"] = std::move(cert);
    out["certified"] = ok;
  }
  return out;
}

Json dispatch(std::string_view op, const Json& req) {
  const Json& args = args_of(req);
  const bool as_float = flag(args, "float");
  if (op == "charpoly-cost") {
    const auto c = charpoly_cost_demo(args.value("n", std::size_t{4}), args.value("seed", std::uint64_t{1}));
    return {{"n", args.value("n", std::size_t{4})}, {"terms", c.permutation_terms}, {"seconds", c.wallclock.count()}};
  }
  const AnyMatrix m = matrix_field(req, "matrix", as_float);
  if (op == "qr") return to_json(householder_qr(as<double>(m)));
  if (op == "gs-compare") return to_json(gs_compare(as<double>(m)));
  if (op == "lstsq") return to_json(least_squares(as<double>(m), vector_arg<double>(args, "rhs")));
  if (op == "eig") return eig_op(m, args);
  if (op == "minpoly") {
    const RationalMatrix a = as<Rational>(m);
    const Polynomial p = minimal_polynomial(a);
    return {{"minpoly", to_json(p)}, {"certified", certify_minimal_polynomial(p, a)}};
  }
  if (op == "krylov") return to_json(krylov_annihilator(as<Rational>(m), vector_arg<Rational>(args, "vector")));
  return std::visit([&](const auto& a) { return typed_op(op, a, args); }, m);
}

}  // namespace

const std::vector<std::string>& compute_ops() {
  static const std::vector<std::string> ops{"ref",  "rref", "solve", "inv",        "basis-check",
                                            "change-basis", "lu", "det", "qr", "gs-compare",
                                            "lstsq", "minpoly", "eig", "krylov", "charpoly-cost"};
  return ops;
}

Json compute(std::string_view op, const Json& request) {
  const auto& ops = compute_ops();
  if (std::find(ops.begin(), ops.end(), op) == ops.end())
    throw Error(ErrorCode::InvalidArgument, "unknown operation '" + std::string(op) + "'");
  try {
    return dispatch(op, request);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad request field: ") + e.what());
  }
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownSession: return 404;
    case ErrorCode::GoalReached: return 409;
    default: return 400;
  }
}

Json error_body(const Error& e) {
  Json out{{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
  if (const auto* s = dynamic_cast<const SingularMatrixError*>(&e)) {
    out["rank"] = s->rank();
    out["free_cols"] = s->free_cols();
  } else if (const auto* z = dynamic_cast<const ZeroPivotError*>(&e)) {
    out["row"] = z->row();
    out["col"] = z->col();
  } else if (const auto* n = dynamic_cast<const NoConvergenceError*>(&e)) {
    Json deflated = Json::array();
    for (const auto& v : n->deflated()) deflated.push_back({{"re", v.real()}, {"im", v.imag()}});
    out["iterations"] = n->iterations();
    out["deflated"] = std::move(deflated);
    out["partial"] = to_json(n->partial());
  } else if (const auto* d = dynamic_cast<const NotDiagonalError*>(&e)) {
    out["residual"] = d->residual();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Routing
// ---------------------------------------------------------------------------

Service::Service(RegistryOptions opts) : registry_(std::move(opts)) {}

namespace {

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    const auto slash = path.find('/');
    const auto part = path.substr(0, slash);
    if (!part.empty()) parts.push_back(part);
    if (slash == std::string_view::npos) break;
    path.remove_prefix(slash + 1);
  }
  return parts;
}

HttpResponse fail(int status, std::string code, std::string message) {
  return {status, {{"code", std::move(code)}, {"message", std::move(message)}}};
}

Json hint_json(const Hint& h) {
  Json out{{"op", to_json(h.suggested_op)}, {"description", describe(h.suggested_op)}, {"rationale", h.rationale}};
  out["resulting_pivot"] = h.resulting_pivot ? Json{h.resulting_pivot->row, h.resulting_pivot->col} : Json();
  return out;
}

Json whatif_json(const WhatIf& w) {
  Json out{{"preview", to_json(w.preview)}, {"would_reach_goal", w.would_reach_goal}};
  if (w.annihilator) out["annihilator"] = to_json(*w.annihilator);
  return out;
}

}  // namespace

HttpResponse Service::handle(std::string_view method, std::string_view path, std::string_view body) {
  Json parsed = Json::object();
  if (!body.empty()) {
    parsed = Json::parse(body, nullptr, false);
    if (parsed.is_discarded()) return fail(400, "ParseError", "request body is not valid JSON");
  }
  try {
    return route(method, path, parsed);
  } catch (const Error& e) {
    return {http_status(e.code()), error_body(e)};
  } catch (const Json::exception& e) {
    return fail(400, "InvalidArgument", std::string("bad request field: ") + e.what());
  }
}

HttpResponse Service::route(std::string_view method, std::string_view path, const Json& body) {
  const auto p = split_path(path);
  if (p.size() < 2 || p[0] != "v1") return fail(404, "NotFound", "no route for " + std::string(path));
  const bool get = method == "GET", post = method == "POST";

  if (p[1] == "compute" && p.size() == 3) {
    if (!post) return fail(405, "MethodNotAllowed", "use POST");
    return {200, compute(p[2], body)};
  }

  if (p[1] == "verify" && p.size() == 2) {
    if (!post) return fail(405, "MethodNotAllowed", "use POST");
    const auto check = verify_transcript(body.contains("transcript") ? body.at("transcript") : body);
    return {200, {{"ok", check.ok}, {"first_mismatch", check.first_mismatch ? Json(*check.first_mismatch) : Json()}}};
  }

  if (p[1] != "session") return fail(404, "NotFound", "no route for " + std::string(path));

  if (p.size() == 2) {
    if (!post) return fail(405, "MethodNotAllowed", "use POST");
    if (flag(body, "float") || (body.contains("args") && flag(args_of(body), "float")))
      throw Error(ErrorCode::DomainMismatch, "sessions are rational only");
    const SessionMode mode = session_mode_from_string(body.value("mode", std::string("reduce_to_ref")));
    const RationalMatrix a = as<Rational>(matrix_field(body, "matrix", false));
    std::optional<RationalVector> b;
    if (body.contains("b")) b = vector_arg<Rational>(body, "b");
    const std::string id = registry_.create(a, mode, b);
    return {200, {{"id", id}, {"state", registry_.state(id)}}};
  }

  const std::string id(p[2]);
  if (p.size() == 3) {
    if (!get) return fail(405, "MethodNotAllowed", "use GET");
    return {200, registry_.state(id)};
  }
  if (p.size() != 4) return fail(404, "NotFound", "no route for " + std::string(path));

  const std::string_view action = p[3];
  if (action == "export") {
    if (!get) return fail(405, "MethodNotAllowed", "use GET");
    return {200, registry_.export_transcript(id)};
  }
  if (!post) return fail(405, "MethodNotAllowed", "use POST");
  if (action == "op") {
    const SessionOp op = session_op_from_json(body.at("op"));
    const ApplyOutcome out = registry_.apply(id, op);
    return {200, {{"accepted", out.accepted}, {"note", out.note}, {"state", registry_.state(id)}}};
  }
  if (action == "hint") return {200, hint_json(registry_.hint(id))};
  if (action == "whatif") return {200, whatif_json(registry_.whatif(id, session_op_from_json(body.at("op"))))};
  return fail(404, "NotFound", "no route for " + std::string(path));
}

}  // namespace matrixfirst
