#include "qforge/relations/rational_function.hpp"

#include "qforge/error.hpp"

namespace qforge::relations {

RationalFunction::RationalFunction(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error(ErrorKind::ZeroDenominator, "rational function with zero denominator");
  normalize();
}

void RationalFunction::normalize() {
  if (num_.is_zero()) {
    den_ = Poly(1);
    return;
  }
  Exponents lo = den_.min_exponents();
  for (auto& e : lo) e = -e;
  Rational lead = den_.leading().second;
  Monomial shift(lo);
  Rational scale = 1 / lead;
  if (!shift.is_one() || scale != 1) {
    den_ = den_.times_term(scale, shift);
    num_ = num_.times_term(scale, shift);
  }
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& rhs) {
  if (den_ == rhs.den_) {
    num_ += rhs.num_;
  } else {
    num_ = num_ * rhs.den_ + rhs.num_ * den_;
    den_ = den_ * rhs.den_;
  }
  normalize();
  return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& rhs) { return *this += -rhs; }

RationalFunction& RationalFunction::operator*=(const RationalFunction& rhs) {
  num_ = num_ * rhs.num_;
  den_ = den_ * rhs.den_;
  normalize();
  return *this;
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& rhs) {
  if (rhs.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by the zero rational function");
  num_ = num_ * rhs.den_;
  den_ = den_ * rhs.num_;
  normalize();
  return *this;
}

bool operator==(const RationalFunction& a, const RationalFunction& b) {
  if (a.den_ == b.den_) return a.num_ == b.num_;
  return a.num_ * b.den_ == b.num_ * a.den_;
}

RationalFunction RationalFunction::pow(int exponent) const {
  if (exponent < 0) return RationalFunction(1) / pow(-exponent);
  RationalFunction r;
  r.num_ = num_.pow(static_cast<unsigned>(exponent));
  r.den_ = den_.pow(static_cast<unsigned>(exponent));
  r.normalize();
  return r;
}

RationalFunction RationalFunction::reduced() const {
  if (den_.is_constant()) return *this;
  if (auto q = num_.divide_exact(den_)) return RationalFunction(*q);
  return *this;
}

RationalFunction RationalFunction::substitute(const Substitution& sub) const {
  std::array<RationalFunction, kNumVars> point;
  for (int v = 0; v < kNumVars; ++v)
    point[v] = sub[v] ? *sub[v] : RationalFunction::variable(static_cast<Var>(v));
  auto lift = [](const Rational& r) { return RationalFunction(r); };
  RationalFunction n = num_.evaluate(point, lift);
  RationalFunction d = den_.evaluate(point, lift);
  if (d.is_zero()) throw Error(ErrorKind::ZeroDenominator, "denominator vanishes identically after substitution");
  return n / d;
}

namespace {

template <class S, class Lift>
void check_used_nonzero(const Poly& p, const std::array<S, kNumVars>& point, Lift&& is_zero) {
  Exponents lo = p.min_exponents();
  for (int v = 0; v < kNumVars; ++v)
    if (lo[v] < 0 && is_zero(point[v]))
      throw Error(ErrorKind::ZeroDenominator, std::string("negative power of ") + kVarNames[v] + " at zero");
}

}  // namespace

ExactScalar RationalFunction::evaluate(const std::array<ExactScalar, kNumVars>& point) const {
  auto zero = [](const ExactScalar& s) { return s.is_zero(); };
  check_used_nonzero(num_, point, zero);
  check_used_nonzero(den_, point, zero);
  auto lift = [](const Rational& r) { return ExactScalar(r); };
  ExactScalar d = den_.evaluate(point, lift);
  if (d.is_zero()) throw Error(ErrorKind::ZeroDenominator, "rational function denominator vanishes at point");
  return num_.evaluate(point, lift) / d;
}

ApproxScalar RationalFunction::evaluate(const std::array<ApproxScalar, kNumVars>& point) const {
  auto zero = [](const ApproxScalar& s) { return s.is_exact_zero(); };
  check_used_nonzero(num_, point, zero);
  check_used_nonzero(den_, point, zero);
  mpfr_prec_t prec = point[0].precision();
  auto lift = [prec](const Rational& r) { return ApproxScalar::from_exact(ExactScalar(r), prec); };
  ApproxScalar d = den_.evaluate(point, lift);
  if (d.is_exact_zero() || d.magnitude_d() <= d.err)
    throw Error(ErrorKind::ZeroDenominator, "rational function denominator vanishes at point");
  return num_.evaluate(point, lift) / d;
}

std::string RationalFunction::to_string() const {
  if (den_ == Poly(1)) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

RationalFunction RationalFunction::parse(std::string_view text) {
  // Split at a '/' outside parentheses that separates two parenthesized groups.
  int depth = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char ch = text[i];
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == '/' && depth == 0) {
      auto unwrap = [](std::string_view s) {
        while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
        while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
        if (s.size() < 2 || s.front() != '(' || s.back() != ')') return s;
        int d = 0;
        for (std::size_t j = 0; j + 1 < s.size(); ++j) {
          if (s[j] == '(') ++d;
          if (s[j] == ')' && --d == 0) return s;  // the first group closes early
        }
        return s.substr(1, s.size() - 2);
      };
      return RationalFunction(Poly::parse(unwrap(text.substr(0, i))), Poly::parse(unwrap(text.substr(i + 1))));
    }
  }
  return RationalFunction(Poly::parse(text));
}

}  // namespace qforge::relations
