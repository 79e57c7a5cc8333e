#pragma once

#include <string>

#include "qforge/exact/cyclotomic.hpp"
#include "qforge/exact/real.hpp"

namespace qforge {

/// Complex high-precision value with an absolute error estimate.
///
/// `certified` means `err` is a rigorous bound; it stays true only while every
/// input to an operation was certified. Uncertified values carry a heuristic
/// estimate in `err`.
struct ApproxScalar {
  Real re;
  Real im;
  double err = 0.0;
  bool certified = true;

  ApproxScalar();
  ApproxScalar(long value);  // NOLINT(google-explicit-constructor)
  ApproxScalar(Real real, Real imag = Real(), double error = 0.0, bool cert = true);

  static ApproxScalar from_exact(const ExactScalar& value, mpfr_prec_t precision = 0);

  mpfr_prec_t precision() const;
  Real magnitude() const;  // |value|
  double magnitude_d() const { return magnitude().to_double(); }
  bool is_exact_zero() const { return re.is_zero() && im.is_zero(); }

  ApproxScalar operator-() const;
  ApproxScalar& operator+=(const ApproxScalar& rhs);
  ApproxScalar& operator-=(const ApproxScalar& rhs);
  ApproxScalar& operator*=(const ApproxScalar& rhs);
  ApproxScalar& operator/=(const ApproxScalar& rhs);
  friend ApproxScalar operator+(ApproxScalar a, const ApproxScalar& b) { return a += b; }
  friend ApproxScalar operator-(ApproxScalar a, const ApproxScalar& b) { return a -= b; }
  friend ApproxScalar operator*(ApproxScalar a, const ApproxScalar& b) { return a *= b; }
  friend ApproxScalar operator/(ApproxScalar a, const ApproxScalar& b) { return a /= b; }

  ApproxScalar pow(long exponent) const;

  std::string to_string(int digits = 20) const;
};

// |a - b| as a double.
double distance(const ApproxScalar& a, const ApproxScalar& b);

}  // namespace qforge
