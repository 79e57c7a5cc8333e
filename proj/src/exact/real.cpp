#include "qforge/exact/real.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace qforge {

namespace {

mpfr_prec_t initial_precision() {
  if (const char* env = std::getenv("QFORGE_PRECISION")) {
    long bits = std::strtol(env, nullptr, 10);
    if (bits >= 64 && bits <= 1 << 16) return bits;
  }
  return 113;
}

std::atomic<mpfr_prec_t>& precision_slot() {
  static std::atomic<mpfr_prec_t> slot{initial_precision()};
  return slot;
}

mpfr_prec_t wider(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }

}  // namespace

mpfr_prec_t Real::default_precision() { return precision_slot().load(); }

void Real::set_default_precision(mpfr_prec_t bits) { precision_slot().store(std::max<mpfr_prec_t>(bits, 64)); }

double unit_roundoff(mpfr_prec_t precision) { return std::ldexp(1.0, 1 - static_cast<int>(precision)); }

Real::Real() : Real(default_precision()) {}

Real::Real(mpfr_prec_t precision) {
  mpfr_init2(value_, precision);
  mpfr_set_zero(value_, 1);
}

Real::Real(double value) : Real() { mpfr_set_d(value_, value, MPFR_RNDN); }

Real::Real(const Rational& value, mpfr_prec_t precision) : Real(precision ? precision : default_precision()) {
  mpfr_set_q(value_, value.get_mpq_t(), MPFR_RNDN);
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept : Real(other.precision()) { mpfr_swap(value_, other.value_); }

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    if (precision() < other.precision()) mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

std::string Real::to_string(int digits) const {
  if (digits <= 0) digits = static_cast<int>(std::ceil(precision() * 0.30103)) + 1;
  std::vector<char> buf(digits + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, value_);
  return buf.data();
}

Real Real::operator-() const {
  Real out(precision());
  mpfr_neg(out.value_, value_, MPFR_RNDN);
  return out;
}

#define QFORGE_REAL_COMPOUND(OP, FN)                  \
  Real& Real::operator OP(const Real& rhs) {          \
    mpfr_prec_t p = wider(*this, rhs);                \
    if (p > precision()) mpfr_prec_round(value_, p, MPFR_RNDN); \
    FN(value_, value_, rhs.value_, MPFR_RNDN);        \
    return *this;                                     \
  }
QFORGE_REAL_COMPOUND(+=, mpfr_add)
QFORGE_REAL_COMPOUND(-=, mpfr_sub)
QFORGE_REAL_COMPOUND(*=, mpfr_mul)
QFORGE_REAL_COMPOUND(/=, mpfr_div)
#undef QFORGE_REAL_COMPOUND

Real abs(const Real& x) {
  Real out(x.precision());
  mpfr_abs(out.value_, x.value_, MPFR_RNDN);
  return out;
}

Real sqrt(const Real& x) {
  Real out(x.precision());
  mpfr_sqrt(out.value_, x.value_, MPFR_RNDN);
  return out;
}

Real hypot(const Real& x, const Real& y) {
  Real out(wider(x, y));
  mpfr_hypot(out.value_, x.value_, y.value_, MPFR_RNDN);
  return out;
}

Real cos(const Real& x) {
  Real out(x.precision());
  mpfr_cos(out.value_, x.value_, MPFR_RNDN);
  return out;
}

Real sin(const Real& x) {
  Real out(x.precision());
  mpfr_sin(out.value_, x.value_, MPFR_RNDN);
  return out;
}

Real Real::pi(mpfr_prec_t precision) {
  Real out(precision);
  mpfr_const_pi(out.value_, MPFR_RNDN);
  return out;
}

}  // namespace qforge
