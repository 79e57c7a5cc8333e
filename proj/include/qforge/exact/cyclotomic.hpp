#pragma once

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qforge/exact/rational.hpp"

namespace qforge {

int euler_phi(int n);

// Coefficients of the n-th cyclotomic polynomial, lowest degree first.
const std::vector<Rational>& cyclotomic_polynomial(int n);

/// Element of the cyclotomic field Q(zeta_n), stored as the reduced residue of a
/// polynomial in zeta_n modulo Phi_n. Order 1 is the plain rationals.
///
/// Values of different orders combine by embedding both into Q(zeta_lcm).
class ExactScalar {
 public:
  ExactScalar();
  ExactScalar(long value);  // NOLINT(google-explicit-constructor)
  ExactScalar(const Rational& value);  // NOLINT(google-explicit-constructor)

  static ExactScalar root_of_unity(int order, long power = 1);

  int order() const noexcept { return order_; }
  const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }

  bool is_zero() const;
  bool is_one() const;
  bool is_rational() const;
  // Throws ConstraintViolated when the value has an irrational component.
  Rational to_rational() const;

  ExactScalar embed(int order) const;
  ExactScalar inverse() const;
  ExactScalar pow(long exponent) const;

  ExactScalar operator-() const;
  ExactScalar& operator+=(const ExactScalar& rhs);
  ExactScalar& operator-=(const ExactScalar& rhs);
  ExactScalar& operator*=(const ExactScalar& rhs);
  ExactScalar& operator/=(const ExactScalar& rhs);

  friend ExactScalar operator+(ExactScalar lhs, const ExactScalar& rhs) { return lhs += rhs; }
  friend ExactScalar operator-(ExactScalar lhs, const ExactScalar& rhs) { return lhs -= rhs; }
  friend ExactScalar operator*(ExactScalar lhs, const ExactScalar& rhs) { return lhs *= rhs; }
  friend ExactScalar operator/(ExactScalar lhs, const ExactScalar& rhs) { return lhs /= rhs; }
  friend bool operator==(const ExactScalar& lhs, const ExactScalar& rhs);

  // Value at zeta_n = exp(2 pi i / n) in double precision.
  std::complex<double> to_complex() const;

  // "p/q" for order 1, "cyclo(n)[c0, c1, ...]" otherwise.
  std::string to_string() const;
  static ExactScalar parse(std::string_view text);

 private:
  friend ExactScalar cyclo_normalize(std::span<const Rational> coeffs, int order);

  int order_ = 1;
  std::vector<Rational> coeffs_;
};

ExactScalar cyclo_normalize(std::span<const Rational> coeffs, int order);

// Throws DivisionByZero when y == 0.
ExactScalar field_div(const ExactScalar& x, const ExactScalar& y);

}  // namespace qforge
