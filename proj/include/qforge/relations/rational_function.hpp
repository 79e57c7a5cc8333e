#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "qforge/exact/approx.hpp"
#include "qforge/exact/cyclotomic.hpp"
#include "qforge/relations/poly.hpp"

namespace qforge::relations {

/// Quotient of two Laurent polynomials, stored without GCD reduction.
///
/// Canonical shape: the denominator has leading coefficient 1 and no monomial
/// content (its minimal exponent in every variable is 0); a zero numerator forces
/// the denominator to 1. Equality is decided by cross-multiplication.
class RationalFunction {
 public:
  RationalFunction() : den_(1) {}
  RationalFunction(long value) : num_(value), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(const Rational& value) : num_(value), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(Poly num) : num_(std::move(num)), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(Poly num, Poly den);

  static RationalFunction variable(Var v) { return RationalFunction(Poly::variable(v)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool depends_on(Var v) const { return num_.depends_on(v) || den_.depends_on(v); }

  RationalFunction operator-() const;
  RationalFunction& operator+=(const RationalFunction& rhs);
  RationalFunction& operator-=(const RationalFunction& rhs);
  RationalFunction& operator*=(const RationalFunction& rhs);
  RationalFunction& operator/=(const RationalFunction& rhs);
  friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
  friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
  friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
  friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }
  friend bool operator==(const RationalFunction& a, const RationalFunction& b);

  RationalFunction pow(int exponent) const;

  // Cancels the denominator when it divides the numerator exactly.
  RationalFunction reduced() const;

  // Simultaneous substitution; variables mapped to nullopt are kept.
  using Substitution = std::array<std::optional<RationalFunction>, kNumVars>;
  RationalFunction substitute(const Substitution& sub) const;

  // Throws ZeroDenominator when the denominator vanishes at the point.
  ExactScalar evaluate(const std::array<ExactScalar, kNumVars>& point) const;
  ApproxScalar evaluate(const std::array<ApproxScalar, kNumVars>& point) const;

  // "num" when the denominator is 1, else "(num)/(den)".
  std::string to_string() const;
  static RationalFunction parse(std::string_view text);

 private:
  void normalize();

  Poly num_;
  Poly den_;
};

}  // namespace qforge::relations
