#pragma once

#include <mpfr.h>

#include <string>

#include "qforge/exact/rational.hpp"

namespace qforge {

/// RAII wrapper over an MPFR float. Binary operations round to the larger of the
/// operand precisions.
class Real {
 public:
  Real();
  explicit Real(mpfr_prec_t precision);
  Real(double value);  // NOLINT(google-explicit-constructor)
  explicit Real(const Rational& value, mpfr_prec_t precision = 0);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  // Mantissa bits for newly created values. Starts at 113 or QFORGE_PRECISION.
  static mpfr_prec_t default_precision();
  static void set_default_precision(mpfr_prec_t bits);

  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }
  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  std::string to_string(int digits = 0) const;
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  Real operator-() const;
  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);
  friend Real operator+(Real lhs, const Real& rhs) { return lhs += rhs; }
  friend Real operator-(Real lhs, const Real& rhs) { return lhs -= rhs; }
  friend Real operator*(Real lhs, const Real& rhs) { return lhs *= rhs; }
  friend Real operator/(Real lhs, const Real& rhs) { return lhs /= rhs; }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.value_, b.value_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return b < a; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.value_, b.value_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return b <= a; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }

  friend Real abs(const Real& x);
  friend Real sqrt(const Real& x);
  friend Real hypot(const Real& x, const Real& y);
  friend Real cos(const Real& x);
  friend Real sin(const Real& x);
  static Real pi(mpfr_prec_t precision);

 private:
  mpfr_t value_;
};

// 2^(1 - precision): relative rounding unit.
double unit_roundoff(mpfr_prec_t precision);

}  // namespace qforge
