#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "matrixfirst/bench.hpp"
#include "matrixfirst/json_io.hpp"

namespace matrixfirst {

/// One-shot operations, shared by the CLI and POST /v1/compute/{op}.
/// The request is {"matrix": ..., "args": {...}}; the matrix may be a JSON
/// matrix or CSV/JSON text. Exact entries unless args.float is true.
///
/// args: strategy ("first_nonzero" | "partial"), tol, trace, rhs, pivoting
/// ("none" | "first_nonzero" | "partial"), method ("lu" | "permutation"),
/// max_sweeps, eigenvectors, vector, basis, dim, subspace, n, seed.
Json compute(std::string_view op, const Json& request);

/// Names accepted by compute(), in CLI order.
const std::vector<std::string>& compute_ops();

/// 404 UnknownSession, 409 GoalReached, 400 for everything else.
int http_status(ErrorCode code);

/// {"code", "message"} plus structured details where the error carries any.
Json error_body(const Error& e);

struct HttpResponse {
  int status = 200;
  Json body;
};

/// Routes the v1 API onto a session registry and compute(). Transport free:
/// the HTTP server and the tests both call handle().
class Service {
 public:
  explicit Service(RegistryOptions opts = {});

  HttpResponse handle(std::string_view method, std::string_view path, std::string_view body);

  SessionRegistry& registry() noexcept { return registry_; }

 private:
  HttpResponse route(std::string_view method, std::string_view path, const Json& body);

  SessionRegistry registry_;
};

/// cpp-httplib front end for a Service.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Port 0 picks a free port. Returns the bound port; throws on failure.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace matrixfirst
