#include "matrixfirst/matrix.hpp"

#include <cstdio>

namespace matrixfirst {

std::string scalar_text(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

RealMatrix to_real(const RationalMatrix& m) {
  std::vector<double> data;
  data.reserve(m.data().size());
  for (const Rational& r : m.data()) data.push_back(r.to_double());
  return RealMatrix(m.rows(), m.cols(), std::move(data));
}

RealVector to_real(const RationalVector& v) {
  RealVector out;
  out.reserve(v.size());
  for (const Rational& r : v) out.push_back(r.to_double());
  return out;
}

double max_abs_diff(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "cannot compare " + a.shape_text() + " and " + b.shape_text());
  }
  double d = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) {
    d = std::max(d, std::abs(a.data()[k] - b.data()[k]));
  }
  return d;
}

namespace {

template <Scalar T>
Matrix<T> arith(const Matrix<T>& a, const Matrix<T>& b, ArithKind kind) {
  switch (kind) {
    case ArithKind::Add: return a + b;
    case ArithKind::Sub: return a - b;
    case ArithKind::Mul: return a * b;
    case ArithKind::Transpose: return a.transpose();
    case ArithKind::Scale:
      if (b.rows() != 1 || b.cols() != 1) {
        throw Error(ErrorCode::ShapeMismatch, "scale factor must be 1x1");
      }
      return a * b(0, 0);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown arithmetic kind");
}

}  // namespace

AnyMatrix mat_arith(const AnyMatrix& lhs, const AnyMatrix& rhs, ArithKind kind) {
  if (kind == ArithKind::Transpose) {
    return std::visit([](const auto& m) -> AnyMatrix { return m.transpose(); }, lhs);
  }
  if (lhs.index() != rhs.index()) {
    throw Error(ErrorCode::DomainMismatch, "operands are in different scalar domains");
  }
  if (const auto* a = std::get_if<RationalMatrix>(&lhs)) {
    return arith(*a, std::get<RationalMatrix>(rhs), kind);
  }
  return arith(std::get<RealMatrix>(lhs), std::get<RealMatrix>(rhs), kind);
}

}  // namespace matrixfirst
