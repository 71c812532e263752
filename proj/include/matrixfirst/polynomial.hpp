#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "matrixfirst/matrix.hpp"
#include "matrixfirst/rational.hpp"

namespace matrixfirst {

using ComplexF = std::complex<double>;

/// Univariate polynomial with exact rational coefficients, lowest degree
/// first. Trailing zero coefficients are stripped, so the zero polynomial has
/// no coefficients and degree -1.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coefficients);

  /// x^d
  static Polynomial monomial(int degree);
  /// x - root
  static Polynomial linear(const Rational& root);

  const std::vector<Rational>& coefficients() const noexcept { return coeffs_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  Rational leading() const;
  Rational coefficient(int power) const;

  /// Divides through by the leading coefficient.
  Polynomial monic() const;

  Rational operator()(const Rational& x) const;
  ComplexF operator()(const ComplexF& z) const;

  friend Polynomial operator+(const Polynomial& p, const Polynomial& q);
  friend Polynomial operator-(const Polynomial& p, const Polynomial& q);
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q);
  friend bool operator==(const Polynomial& p, const Polynomial& q) = default;

  /// Text form for display, e.g. "x^2 - 5x + 6".
  std::string str() const;

 private:
  void normalize();

  std::vector<Rational> coeffs_;
};

struct DivMod {
  Polynomial quotient;
  Polynomial remainder;
};

/// p = q * quotient + remainder with deg(remainder) < deg(q).
DivMod divmod(const Polynomial& p, const Polynomial& q);

struct GcdLcm {
  Polynomial gcd;
  Polynomial lcm;
};

/// Monic gcd and lcm. Throws when both inputs are zero.
GcdLcm gcd_lcm(const Polynomial& p, const Polynomial& q);

/// p(A) = sum c_i A^i by the Horner recurrence, using deg(p) products.
RationalMatrix eval_matrix(const Polynomial& p, const RationalMatrix& a);
RealMatrix eval_matrix(const Polynomial& p, const RealMatrix& a);

}  // namespace matrixfirst
