#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "matrixfirst/service.hpp"

namespace py = pybind11;
using namespace matrixfirst;

namespace {

Json parse_request(const std::string& text) {
  try {
    return text.empty() ? Json::object() : Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact and floating-point linear algebra engine";

  static py::exception<Error> error_type(m, "MatrixFirstError");
  py::register_exception_translator([](std::exception_ptr p) {
    if (!p) return;
    try {
      std::rethrow_exception(p);
    } catch (const Error& e) {
      // The structured body rides along as the second argument.
      py::object exc = py::handle(error_type.ptr())(py::str(e.what()), py::str(error_body(e).dump()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  m.def(
      "compute",
      [](const std::string& op, const std::string& request) {
        const Json req = parse_request(request);
        Json out;
        {
          py::gil_scoped_release release;
          out = compute(op, req);
        }
        return out.dump();
      },
      py::arg("op"), py::arg("request"), "Run a compute operation on a JSON request; returns JSON text.");

  m.def("compute_ops", &compute_ops, "Names accepted by compute().");

  py::class_<Service>(m, "Service")
      .def(py::init<>())
      .def(
          "handle",
          [](Service& s, const std::string& method, const std::string& path, const std::string& body) {
            HttpResponse r;
            {
              py::gil_scoped_release release;
              r = s.handle(method, path, body);
            }
            return py::make_tuple(r.status, r.body.dump());
          },
          py::arg("method"), py::arg("path"), py::arg("body") = "",
          "Dispatch a v1 API request in-process; returns (status, JSON text).");
}
