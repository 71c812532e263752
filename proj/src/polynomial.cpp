#include "matrixfirst/polynomial.hpp"

#include <sstream>

#include "matrixfirst/error.hpp"

namespace matrixfirst {

Polynomial::Polynomial(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) {
  normalize();
}

Polynomial Polynomial::monomial(int degree) {
  if (degree < 0) throw Error(ErrorCode::InvalidArgument, "negative monomial degree");
  std::vector<Rational> c(static_cast<std::size_t>(degree) + 1, Rational(0));
  c.back() = Rational(1);
  return Polynomial(std::move(c));
}

Polynomial Polynomial::linear(const Rational& root) { return Polynomial({-root, Rational(1)}); }

void Polynomial::normalize() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Rational Polynomial::leading() const { return coeffs_.empty() ? Rational(0) : coeffs_.back(); }

Rational Polynomial::coefficient(int power) const {
  if (power < 0 || power > degree()) return Rational(0);
  return coeffs_[static_cast<std::size_t>(power)];
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  const Rational lead = leading();
  std::vector<Rational> c = coeffs_;
  for (Rational& x : c) x /= lead;
  return Polynomial(std::move(c));
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

ComplexF Polynomial::operator()(const ComplexF& z) const {
  ComplexF acc(0.0, 0.0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + it->to_double();
  return acc;
}

Polynomial operator+(const Polynomial& p, const Polynomial& q) {
  std::vector<Rational> c(std::max(p.coeffs_.size(), q.coeffs_.size()), Rational(0));
  for (std::size_t i = 0; i < p.coeffs_.size(); ++i) c[i] += p.coeffs_[i];
  for (std::size_t i = 0; i < q.coeffs_.size(); ++i) c[i] += q.coeffs_[i];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& p, const Polynomial& q) {
  std::vector<Rational> c(std::max(p.coeffs_.size(), q.coeffs_.size()), Rational(0));
  for (std::size_t i = 0; i < p.coeffs_.size(); ++i) c[i] += p.coeffs_[i];
  for (std::size_t i = 0; i < q.coeffs_.size(); ++i) c[i] -= q.coeffs_[i];
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& p, const Polynomial& q) {
  if (p.is_zero() || q.is_zero()) return {};
  std::vector<Rational> c(p.coeffs_.size() + q.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < p.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < q.coeffs_.size(); ++j) c[i + j] += p.coeffs_[i] * q.coeffs_[j];
  return Polynomial(std::move(c));
}

std::string Polynomial::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const Rational& c = coeffs_[static_cast<std::size_t>(k)];
    if (c.is_zero()) continue;
    const Rational mag = abs(c);
    if (first) {
      if (c.sign() < 0) os << "-";
    } else {
      os << (c.sign() < 0 ? " - " : " + ");
    }
    first = false;
    const bool unit = mag == Rational(1);
    if (k == 0 || !unit) {
      if (!mag.is_integer() && k > 0) {
        os << "(" << mag << ")";
      } else {
        os << mag;
      }
    }
    if (k >= 1) os << "x";
    if (k >= 2) os << "^" << k;
  }
  return os.str();
}

DivMod divmod(const Polynomial& p, const Polynomial& q) {
  if (q.is_zero()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero polynomial");
  std::vector<Rational> rem = p.coefficients();
  const int dq = q.degree();
  const Rational lead = q.leading();
  if (p.degree() < dq) return {Polynomial{}, p};
  std::vector<Rational> quot(static_cast<std::size_t>(p.degree() - dq) + 1, Rational(0));
  for (int k = p.degree() - dq; k >= 0; --k) {
    const Rational factor = rem[static_cast<std::size_t>(k + dq)] / lead;
    quot[static_cast<std::size_t>(k)] = factor;
    if (factor.is_zero()) continue;
    for (int j = 0; j <= dq; ++j) {
      rem[static_cast<std::size_t>(k + j)] -= factor * q.coefficients()[static_cast<std::size_t>(j)];
    }
  }
  rem.resize(static_cast<std::size_t>(dq));
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

GcdLcm gcd_lcm(const Polynomial& p, const Polynomial& q) {
  if (p.is_zero() && q.is_zero()) {
    throw Error(ErrorCode::InvalidArgument, "gcd of two zero polynomials is undefined");
  }
  Polynomial a = p;
  Polynomial b = q;
  while (!b.is_zero()) {
    Polynomial r = divmod(a, b).remainder;
    a = std::move(b);
    b = std::move(r);
  }
  Polynomial g = a.monic();
  if (p.is_zero() || q.is_zero()) return {g, Polynomial{}};
  Polynomial l = divmod(p * q, g).quotient.monic();
  return {g, l};
}

namespace {

template <Scalar T>
Matrix<T> horner(const Polynomial& p, const Matrix<T>& a) {
  if (!a.is_square()) throw Error(ErrorCode::ShapeMismatch, "p(A) needs a square matrix");
  const std::size_t n = a.rows();
  Matrix<T> acc(n, n);
  if (p.is_zero()) return acc;
  auto coeff = [&](int k) {
    if constexpr (is_exact_v<T>) {
      return p.coefficient(k);
    } else {
      return p.coefficient(k).to_double();
    }
  };
  for (std::size_t i = 0; i < n; ++i) acc(i, i) = coeff(p.degree());
  for (int k = p.degree() - 1; k >= 0; --k) {
    acc = acc * a;
    const T c = coeff(k);
    for (std::size_t i = 0; i < n; ++i) acc(i, i) += c;
  }
  return acc;
}

}  // namespace

RationalMatrix eval_matrix(const Polynomial& p, const RationalMatrix& a) { return horner(p, a); }
RealMatrix eval_matrix(const Polynomial& p, const RealMatrix& a) { return horner(p, a); }

}  // namespace matrixfirst
