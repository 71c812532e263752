#include "matrixfirst/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "matrixfirst/factor.hpp"
#include "matrixfirst/service.hpp"

namespace matrixfirst::cli {

namespace {

struct Config {
  std::string in;
  bool json = false;
  bool as_float = false;
  bool trace = false;
  std::optional<std::string> strategy;
  std::optional<double> tol;
  std::uint64_t seed = 1;

  std::string rhs;
  std::string basis;
  std::string subspace;
  std::string vector;
  std::string method = "lu";
  std::string pivoting;
  bool unique = false;
  bool no_vectors = false;
  std::optional<std::size_t> dim;
  std::optional<std::size_t> max_sweeps;
  std::optional<std::size_t> hilbert;
  std::optional<std::size_t> random;
  std::size_t n = 4;

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string log;
  double expiry_hours = 24.0;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// A path when the file exists, otherwise inline text such as "1,2,3".
std::string file_or_inline(const std::string& s) {
  std::error_code ec;
  if (s == "-" || std::filesystem::is_regular_file(s, ec)) return read_file(s);
  return s;
}

std::optional<double> env_tol() {
  const char* raw = std::getenv("MATRIXFIRST_TOL");
  if (!raw || !*raw) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0') throw UsageError(std::string("MATRIXFIRST_TOL is not a number: '") + raw + "'");
  return v;
}

Json build_request(const std::string& op, const Config& c) {
  Json args = Json::object();
  if (c.as_float) args["float"] = true;
  if (c.strategy) args["strategy"] = *c.strategy;
  if (c.trace) args["trace"] = true;
  std::optional<double> tol = c.tol ? c.tol : env_tol();
  if (tol) {
    if (!(*tol > 0.0)) throw UsageError("tolerance must be positive");
    args["tol"] = *tol;
  }
  if (!c.rhs.empty()) args["rhs"] = file_or_inline(c.rhs);
  if (!c.vector.empty()) args["vector"] = file_or_inline(c.vector);
  if (!c.basis.empty()) args["basis"] = read_file(c.basis);
  if (!c.subspace.empty()) args["subspace"] = read_file(c.subspace);
  if (c.dim) args["dim"] = *c.dim;
  if (!c.pivoting.empty()) args["pivoting"] = c.pivoting;
  if (op == "det") args["method"] = c.method;
  if (c.max_sweeps) args["max_sweeps"] = *c.max_sweeps;
  if (c.no_vectors) args["eigenvectors"] = false;
  if (op == "charpoly-cost") {
    args["n"] = c.n;
    args["seed"] = c.seed;
    return {{"args", std::move(args)}};
  }

  Json req{{"args", std::move(args)}};
  if (op == "gs-compare" && (c.hilbert || c.random)) {
    if (c.hilbert) {
      req["matrix"] = to_json(hilbert_matrix(*c.hilbert));
    } else {
      std::mt19937_64 rng(c.seed);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      RealMatrix m(*c.random, *c.random);
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = u(rng);
      req["matrix"] = to_json(m);
    }
    req["args"]["float"] = true;
    return req;
  }
  if (c.in.empty()) throw UsageError(op + " needs --in <matrix file>");
  req["matrix"] = read_file(c.in);
  return req;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse:
    case ErrorCode::InvalidArgument: return kExitUsage;
    default: return kExitDomain;
  }
}

int serve(const Config& c, std::ostream& out) {
  RegistryOptions opts;
  if (!c.log.empty()) opts.log_path = c.log;
  if (!(c.expiry_hours > 0.0)) throw UsageError("--expiry-hours must be positive");
  opts.idle_expiry = std::chrono::seconds(static_cast<std::int64_t>(c.expiry_hours * 3600.0));
  Service service(std::move(opts));
  HttpServer server(service);
  const int port = server.bind(c.host, c.port);
  out << "listening on http://" << c.host << ":" << port << std::endl;
  server.listen();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Text rendering
// ---------------------------------------------------------------------------

std::string scalar_string(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  return v.dump();
}

bool is_primitive_array(const Json& v) {
  return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_primitive(); });
}

bool is_grid(const Json& v) {
  if (!v.is_array() || v.empty() || !v.front().is_array() || v.front().empty()) return false;
  const std::size_t w = v.front().size();
  return std::all_of(v.begin(), v.end(), [&](const Json& r) { return is_primitive_array(r) && r.size() == w; });
}

const Json* grid_of(const Json& v) {
  if (v.is_object() && v.contains("rows") && v.contains("cols") && v.contains("data") && is_grid(v.at("data")))
    return &v.at("data");
  if (is_grid(v)) return &v;
  return nullptr;
}

void print_grid(const Json& rows, std::ostream& out, const std::string& indent) {
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < r.size(); ++j) width[j] = std::max(width[j], scalar_string(r[j]).size());
  for (const auto& r : rows) {
    out << indent << "[";
    for (std::size_t j = 0; j < r.size(); ++j) {
      const std::string s = scalar_string(r[j]);
      out << (j ? "  " : " ") << std::string(width[j] - s.size(), ' ') << s;
    }
    out << " ]\n";
  }
}

void render(const std::string& key, const Json& v, std::ostream& out, const std::string& indent) {
  const std::string label = key.empty() ? indent : indent + key + ":";
  if (const Json* g = grid_of(v)) {
    out << label << "\n";
    print_grid(*g, out, indent + "  ");
  } else if (v.is_object()) {
    if (!key.empty()) out << label << "\n";
    const std::string inner = key.empty() ? indent : indent + "  ";
    for (const auto& [k, x] : v.items()) render(k, x, out, inner);
  } else if (is_primitive_array(v)) {
    out << label << " [";
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << scalar_string(v[i]);
    out << "]\n";
  } else if (v.is_array()) {
    out << label << "\n";
    for (std::size_t i = 0; i < v.size(); ++i) render("[" + std::to_string(i) + "]", v[i], out, indent + "  ");
  } else {
    out << label << " " << scalar_string(v) << "\n";
  }
}

/// Two-space indented JSON that keeps arrays of scalars (and matrix rows) on
/// one line.
void pretty_json(const Json& v, std::ostream& out, const std::string& indent) {
  const bool flat = v.is_primitive() || is_primitive_array(v) || is_grid(v) || v.empty();
  if (flat) {
    if (is_grid(v)) {
      out << "[";
      for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i].dump();
      out << "]";
    } else {
      out << v.dump();
    }
    return;
  }
  const std::string inner = indent + "  ";
  out << (v.is_object() ? "{" : "[") << "\n";
  std::size_t k = 0;
  for (const auto& [key, x] : v.items()) {
    out << inner;
    if (v.is_object()) out << Json(key).dump() << ": ";
    pretty_json(x, out, inner);
    out << (++k < v.size() ? ",\n" : "\n");
  }
  out << indent << (v.is_object() ? "}" : "]");
}

}  // namespace

void render_text(const Json& result, std::ostream& out) { render("", result, out, ""); }

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Matrix-first linear algebra: row reduction through QR eigenvalues", "matrixfirst"};
  app.require_subcommand(1);
  Config c;

  auto common = [&](CLI::App* sub, bool needs_input = true) {
    if (needs_input) sub->add_option("--in", c.in, "matrix file (CSV or JSON; '-' for stdin)");
    sub->add_flag("--json", c.json, "emit JSON");
    sub->add_flag("--float", c.as_float, "parse entries as floating point");
    sub->add_option("--strategy", c.strategy, "pivot strategy")->check(CLI::IsMember({"first_nonzero", "partial"}));
    sub->add_option("--tol", c.tol, "float zero tolerance (overrides MATRIXFIRST_TOL)");
    sub->add_flag("--trace", c.trace, "emit the step trace");
  };

  std::map<std::string, CLI::App*> subs;
  auto add = [&](const std::string& name, const std::string& help, bool needs_input = true) {
    CLI::App* s = app.add_subcommand(name, help);
    common(s, needs_input);
    subs[name] = s;
    return s;
  };

  add("ref", "row echelon form with pivots and free columns");
  add("rref", "reduced row echelon form");
  add("solve", "solve A x = b")->add_option("--rhs", c.rhs, "right-hand side (file or inline '1,2,3')")->required();
  subs["solve"]->add_flag("--unique", c.unique, "fail unless the solution is unique");
  add("inv", "inverse by Gauss-Jordan on [A | I]");
  auto* bc = add("basis-check", "do the columns form a basis");
  bc->add_option("--dim", c.dim, "expected dimension (default: number of rows)");
  bc->add_option("--subspace", c.subspace, "file whose columns span the subspace");
  auto* cb = add("change-basis", "represent A in the basis given by the columns of --basis");
  cb->add_option("--basis", c.basis, "basis matrix file")->required();
  cb->add_option("--vector", c.vector, "also give coordinates of this vector");
  add("lu", "P A = L R")->add_option("--pivoting", c.pivoting, "none | first_nonzero | partial")
      ->check(CLI::IsMember({"none", "first_nonzero", "partial"}));
  add("det", "determinant")->add_option("--method", c.method, "lu | permutation")
      ->check(CLI::IsMember({"lu", "permutation"}));
  add("qr", "Householder QR");
  auto* gs = add("gs-compare", "orthogonality loss: classical Gram-Schmidt vs Householder");
  gs->add_option("--hilbert", c.hilbert, "use the n x n Hilbert matrix instead of --in");
  gs->add_option("--random", c.random, "use a random n x n matrix (see --seed)");
  gs->add_option("--seed", c.seed, "seed for --random");
  add("lstsq", "least squares via QR")->add_option("--rhs", c.rhs, "right-hand side")->required();
  add("minpoly", "exact minimal polynomial with certificate");
  auto* eig = add("eig", "eigenvalues by Hessenberg + shifted QR");
  eig->add_option("--max-sweeps", c.max_sweeps, "sweep budget (default 30 n)");
  eig->add_flag("--no-eigenvectors", c.no_vectors, "skip eigenvectors");
  add("krylov", "Krylov iterates and annihilator of a vector")->add_option("--vector", c.vector, "start vector")
      ->required();
  auto* cc = add("charpoly-cost", "permutation-expansion cost demo", false);
  cc->add_option("--n", c.n, "dimension (at most 8)");
  cc->add_option("--seed", c.seed, "seed for the random matrix");

  auto* sv = app.add_subcommand("serve", "serve the v1 HTTP API");
  sv->add_option("--host", c.host, "bind address");
  sv->add_option("--port", c.port, "port (0 picks a free one)");
  sv->add_option("--log", c.log, "append-only session log (JSON lines)");
  sv->add_option("--expiry-hours", c.expiry_hours, "idle session expiry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  const std::string op = app.get_subcommands().front()->get_name();
  try {
    if (op == "serve") return serve(c, out);
    const Json result = compute(op, build_request(op, c));
    if (c.json) {
      pretty_json(result, out, "");
      out << "\n";
    } else {
      render_text(result, out);
    }
    if (op == "solve") {
      const std::string kind = result.at("kind");
      if (kind == "inconsistent") {
        err << "error: system is inconsistent (row " << result.at("witness_row") << " reads 0 = nonzero)\n";
        return kExitDomain;
      }
      if (c.unique && kind != "unique") {
        err << "error: solution is not unique\n";
        return kExitDomain;
      }
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    if (c.json) {
      pretty_json(error_body(e), err, "");
      err << "\n";
    } else {
      err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    }
    return exit_code_for(e.code());
  }
}

}  // namespace matrixfirst::cli
