#include "matrixfirst/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace matrixfirst {

namespace {

RealVector checked_eval(const LinearMapProbe& f, std::span<const double> u) {
  RealVector y = f.eval(u);
  if (y.size() != f.dim_out) {
    throw Error(ErrorCode::ShapeMismatch, "map returned a vector of length " +
                                              std::to_string(y.size()) + ", expected " +
                                              std::to_string(f.dim_out));
  }
  return y;
}

}  // namespace

RealMatrix standard_matrix(const LinearMapProbe& f) {
  if (!f.eval) throw Error(ErrorCode::InvalidArgument, "map has no evaluator");
  RealMatrix a(f.dim_out, f.dim_in);
  for (std::size_t i = 0; i < f.dim_in; ++i) {
    const RealVector e = unit_vector<double>(f.dim_in, i);
    const RealVector col = checked_eval(f, e);
    for (std::size_t r = 0; r < f.dim_out; ++r) a(r, i) = col[r];
  }
  return a;
}

LinearityReport linearity_probe(const LinearMapProbe& f, std::size_t trials, std::uint64_t seed,
                                double tol) {
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "linearity probe needs at least one trial");
  if (!f.eval) throw Error(ErrorCode::InvalidArgument, "map has no evaluator");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> entry(0.0, 1.0);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);

  LinearityReport report;
  for (std::size_t t = 0; t < trials; ++t) {
    RealVector u(f.dim_in), v(f.dim_in), w(f.dim_in);
    for (auto& x : u) x = entry(rng);
    for (auto& x : v) x = entry(rng);
    const double alpha = coeff(rng);
    const double beta = coeff(rng);
    for (std::size_t i = 0; i < f.dim_in; ++i) w[i] = alpha * u[i] + beta * v[i];

    const RealVector fu = checked_eval(f, u);
    const RealVector fv = checked_eval(f, v);
    const RealVector fw = checked_eval(f, w);
    RealVector diff(f.dim_out), au(f.dim_out), bv(f.dim_out);
    for (std::size_t i = 0; i < f.dim_out; ++i) {
      au[i] = alpha * fu[i];
      bv[i] = beta * fv[i];
      diff[i] = fw[i] - au[i] - bv[i];
    }
    const double scale = std::max(1.0, norm2(au) + norm2(bv));
    const double violation = norm2(diff) / scale;
    if (violation > report.max_violation) report.max_violation = violation;
    if (violation > tol && !report.counterexample) {
      report.linear = false;
      report.counterexample = LinearityCounterexample{u, v, alpha, beta, violation};
    }
  }
  return report;
}

double dot(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw Error(ErrorCode::ShapeMismatch, "vectors of unequal length");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double norm2(std::span<const double> u) {
  double scale = 0.0;
  for (double x : u) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double x : u) s += (x / scale) * (x / scale);
  return scale * std::sqrt(s);
}

AngleReport dot_norm_angle(std::span<const double> u, std::span<const double> v) {
  AngleReport r;
  r.dot = dot(u, v);
  r.norm_u = norm2(u);
  r.norm_v = norm2(v);
  r.cauchy_schwarz_gap = r.norm_u * r.norm_v - std::abs(r.dot);
  if (r.norm_u > 0.0 && r.norm_v > 0.0) {
    const double c = std::clamp(r.dot / (r.norm_u * r.norm_v), -1.0, 1.0);
    r.cos_angle = c;
    r.angle = std::acos(c);
  }
  return r;
}

RealMatrix rotation2d(double theta) {
  if (!std::isfinite(theta)) throw Error(ErrorCode::InvalidArgument, "rotation angle must be finite");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return RealMatrix{{c, -s}, {s, c}};
}

double orthogonality_deviation(const RealMatrix& q) {
  const RealMatrix g = q.transpose() * q;
  double dev = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      dev = std::max(dev, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
  return dev;
}

OrthogonalityReport is_orthogonal(const RealMatrix& q, double tol) {
  if (!q.is_square()) throw Error(ErrorCode::ShapeMismatch, "orthogonality needs a square matrix");
  const double dev = orthogonality_deviation(q);
  return {dev <= tol, dev};
}

}  // namespace matrixfirst
