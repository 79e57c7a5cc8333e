#include "qforge/exact/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qforge/error.hpp"

namespace qforge {

namespace {

double rounding(const ApproxScalar& v) { return 4.0 * unit_roundoff(v.precision()) * v.magnitude_d(); }

}  // namespace

ApproxScalar::ApproxScalar() = default;

ApproxScalar::ApproxScalar(long value) : re(static_cast<double>(value)) {}

ApproxScalar::ApproxScalar(Real real, Real imag, double error, bool cert)
    : re(std::move(real)), im(std::move(imag)), err(error), certified(cert) {}

ApproxScalar ApproxScalar::from_exact(const ExactScalar& value, mpfr_prec_t precision) {
  if (precision == 0) precision = Real::default_precision();
  ApproxScalar out{Real(precision), Real(precision)};
  const auto& c = value.coeffs();
  if (value.is_rational()) {
    out.re = Real(c[0], precision);
  } else {
    Real two_pi = Real::pi(precision + 16);
    two_pi *= Real(2.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (c[j] == 0) continue;
      Real angle = two_pi * Real(Rational(static_cast<long>(j), value.order()), precision + 16);
      Real coeff(c[j], precision + 16);
      out.re += coeff * cos(angle);
      out.im += coeff * sin(angle);
    }
  }
  out.err = rounding(out);
  return out;
}

mpfr_prec_t ApproxScalar::precision() const { return std::min(re.precision(), im.precision()); }

Real ApproxScalar::magnitude() const { return hypot(re, im); }

ApproxScalar ApproxScalar::operator-() const { return ApproxScalar{-re, -im, err, certified}; }

ApproxScalar& ApproxScalar::operator+=(const ApproxScalar& rhs) {
  re += rhs.re;
  im += rhs.im;
  err += rhs.err + rounding(*this);
  certified = certified && rhs.certified;
  return *this;
}

ApproxScalar& ApproxScalar::operator-=(const ApproxScalar& rhs) {
  re -= rhs.re;
  im -= rhs.im;
  err += rhs.err + rounding(*this);
  certified = certified && rhs.certified;
  return *this;
}

ApproxScalar& ApproxScalar::operator*=(const ApproxScalar& rhs) {
  double ma = magnitude_d(), mb = rhs.magnitude_d();
  Real r = re * rhs.re - im * rhs.im;
  Real i = re * rhs.im + im * rhs.re;
  re = std::move(r);
  im = std::move(i);
  err = ma * rhs.err + mb * err + err * rhs.err + rounding(*this);
  certified = certified && rhs.certified;
  return *this;
}

ApproxScalar& ApproxScalar::operator/=(const ApproxScalar& rhs) {
  if (rhs.is_exact_zero()) throw Error(ErrorKind::DivisionByZero, "numeric division by zero");
  double ma = magnitude_d(), mb = rhs.magnitude_d();
  Real den = rhs.re * rhs.re + rhs.im * rhs.im;
  Real r = (re * rhs.re + im * rhs.im) / den;
  Real i = (im * rhs.re - re * rhs.im) / den;
  re = std::move(r);
  im = std::move(i);
  double quotient = ma / mb;
  if (rhs.err >= mb)
    err = std::numeric_limits<double>::infinity();
  else
    err = (err + quotient * rhs.err) / (mb - rhs.err) + rounding(*this);
  certified = certified && rhs.certified;
  return *this;
}

ApproxScalar ApproxScalar::pow(long exponent) const {
  if (exponent < 0) return ApproxScalar(1) / pow(-exponent);
  ApproxScalar base = *this;
  ApproxScalar out(Real(1.0), Real(precision()));
  out.re = Real(Rational(1), precision());
  while (exponent > 0) {
    if (exponent & 1) out *= base;
    exponent >>= 1;
    if (exponent > 0) base *= base;
  }
  return out;
}

std::string ApproxScalar::to_string(int digits) const {
  if (im.is_zero()) return re.to_string(digits);
  std::string s = re.to_string(digits);
  s += im.sign() < 0 ? " - " : " + ";
  s += abs(im).to_string(digits) + "i";
  return s;
}

double distance(const ApproxScalar& a, const ApproxScalar& b) {
  return hypot(a.re - b.re, a.im - b.im).to_double();
}

}  // namespace qforge
