#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>

#include "matrixfirst/matrix.hpp"

namespace matrixfirst {

/// A black-box map R^dim_in -> R^dim_out, to be probed for linearity and
/// turned into its standard matrix.
struct LinearMapProbe {
  std::size_t dim_in = 0;
  std::size_t dim_out = 0;
  std::function<RealVector(std::span<const double>)> eval;
};

/// Column i is f(e_i).
RealMatrix standard_matrix(const LinearMapProbe& f);

struct LinearityCounterexample {
  RealVector u;
  RealVector v;
  double alpha = 0.0;
  double beta = 0.0;
  double violation = 0.0;
};

struct LinearityReport {
  bool linear = true;
  /// max ‖f(αu+βv) − αf(u) − βf(v)‖ / max(1, ‖αf(u)‖ + ‖βf(v)‖) over trials
  double max_violation = 0.0;
  std::optional<LinearityCounterexample> counterexample;
};

inline constexpr double kLinearityTolerance = 1e-9;

LinearityReport linearity_probe(const LinearMapProbe& f, std::size_t trials, std::uint64_t seed,
                                double tol = kLinearityTolerance);

struct AngleReport {
  double dot = 0.0;
  double norm_u = 0.0;
  double norm_v = 0.0;
  /// Empty when either vector is zero.
  std::optional<double> cos_angle;
  std::optional<double> angle;
  /// ‖u‖‖v‖ − |⟨u,v⟩|, nonnegative up to rounding.
  double cauchy_schwarz_gap = 0.0;
};

double dot(std::span<const double> u, std::span<const double> v);
double norm2(std::span<const double> u);

AngleReport dot_norm_angle(std::span<const double> u, std::span<const double> v);

/// [[cos θ, −sin θ], [sin θ, cos θ]]
RealMatrix rotation2d(double theta);

struct OrthogonalityReport {
  bool orthogonal = false;
  double deviation = 0.0;  // max |QᵀQ − I|
};

/// ‖QᵀQ − I‖_max for any matrix with at least as many rows as columns.
double orthogonality_deviation(const RealMatrix& q);

OrthogonalityReport is_orthogonal(const RealMatrix& q, double tol);

}  // namespace matrixfirst
