#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qforge/exact/rational.hpp"

namespace qforge::relations {

// Symbols of the relation coefficients. `w` stands for a primitive root of unity
// whose order is fixed by the family that uses it.
enum class Var : int { a = 0, b, c, q, x, w };
inline constexpr int kNumVars = 6;
inline constexpr std::array<const char*, kNumVars> kVarNames{"a", "b", "c", "q", "x", "w"};

using Exponents = std::array<int, kNumVars>;

std::optional<Var> var_from_name(std::string_view name);

/// Packed monomial a^e0 b^e1 c^e2 q^e3 x^e4 w^e5 with exponents in [-512, 511].
/// Integer order on the packed key is lexicographic order with a > b > c > q > x > w.
class Monomial {
 public:
  static constexpr int kBits = 10;
  static constexpr int kBias = 1 << (kBits - 1);

  Monomial() : key_(bias_key()) {}
  explicit Monomial(const Exponents& e);
  static Monomial from_key(std::uint64_t key) {
    Monomial m;
    m.key_ = key;
    return m;
  }

  std::uint64_t key() const { return key_; }
  int exponent(Var v) const {
    return static_cast<int>((key_ >> shift(v)) & ((1u << kBits) - 1)) - kBias;
  }
  Exponents exponents() const;
  bool is_one() const { return key_ == bias_key(); }

  Monomial operator*(const Monomial& rhs) const { return from_key(key_ + rhs.key_ - bias_key()); }
  Monomial inverse() const;

  friend auto operator<=>(const Monomial&, const Monomial&) = default;

 private:
  static constexpr int shift(Var v) { return kBits * (kNumVars - 1 - static_cast<int>(v)); }
  static constexpr std::uint64_t bias_key() {
    std::uint64_t k = 0;
    for (int i = 0; i < kNumVars; ++i) k |= static_cast<std::uint64_t>(kBias) << (kBits * i);
    return k;
  }

  std::uint64_t key_;
};

/// Laurent polynomial in (a,b,c,q,x,w) with rational coefficients.
/// Terms are kept sorted by descending monomial with no zero coefficients.
class Poly {
 public:
  using Term = std::pair<Monomial, Rational>;

  Poly() = default;
  Poly(long constant);  // NOLINT(google-explicit-constructor)
  Poly(const Rational& constant);  // NOLINT(google-explicit-constructor)
  static Poly variable(Var v);
  static Poly term(const Rational& coeff, const Monomial& m);
  static Poly from_terms(std::vector<Term> terms);  // any order, duplicates summed

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_term() const { return terms_.size() == 1; }
  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }
  const Term& leading() const { return terms_.front(); }

  Exponents min_exponents() const;
  Exponents max_exponents() const;
  bool depends_on(Var v) const;

  Poly operator-() const;
  Poly& operator+=(const Poly& rhs);
  Poly& operator-=(const Poly& rhs);
  Poly& operator*=(const Poly& rhs);
  friend Poly operator+(Poly lhs, const Poly& rhs) { return lhs += rhs; }
  friend Poly operator-(Poly lhs, const Poly& rhs) { return lhs -= rhs; }
  friend Poly operator*(const Poly& lhs, const Poly& rhs);
  friend bool operator==(const Poly&, const Poly&) = default;

  Poly times_term(const Rational& coeff, const Monomial& m) const;
  Poly pow(unsigned exponent) const;

  // Quotient when `divisor` divides exactly in the Laurent ring, else nullopt.
  std::optional<Poly> divide_exact(const Poly& divisor) const;

  // Replace v by coeff * m (m may contain v only if it is v itself).
  Poly substitute_term(Var v, const Rational& coeff, const Monomial& m) const;
  // Substitute rational values for a subset of variables.
  Poly specialize(const std::array<std::optional<Rational>, kNumVars>& values) const;

  // Evaluate with `lift` converting coefficients and variable values of type S.
  // Negative powers use S(1) / power; variables absent from the polynomial are not read.
  template <class S, class Lift>
  S evaluate(const std::array<S, kNumVars>& point, Lift&& lift) const;

  // Canonical text, e.g. "(-1)*a*b*x + c".
  std::string to_string() const;
  static Poly parse(std::string_view text);

 private:
  std::vector<Term> terms_;
};

template <class S, class Lift>
S Poly::evaluate(const std::array<S, kNumVars>& point, Lift&& lift) const {
  if (terms_.empty()) return lift(Rational(0));
  Exponents lo = min_exponents(), hi = max_exponents();
  std::array<std::vector<S>, kNumVars> pos, neg;
  for (int v = 0; v < kNumVars; ++v) {
    if (hi[v] > 0) {
      pos[v].reserve(hi[v] + 1);
      pos[v].push_back(lift(Rational(1)));
      for (int e = 1; e <= hi[v]; ++e) pos[v].push_back(pos[v].back() * point[v]);
    }
    if (lo[v] < 0) {
      S inv = lift(Rational(1)) / point[v];
      neg[v].reserve(-lo[v] + 1);
      neg[v].push_back(lift(Rational(1)));
      for (int e = 1; e <= -lo[v]; ++e) neg[v].push_back(neg[v].back() * inv);
    }
  }
  S total = lift(Rational(0));
  for (const auto& [m, c] : terms_) {
    S t = lift(c);
    for (int v = 0; v < kNumVars; ++v) {
      int e = m.exponent(static_cast<Var>(v));
      if (e > 0) t *= pos[v][e];
      else if (e < 0) t *= neg[v][-e];
    }
    total += t;
  }
  return total;
}

}  // namespace qforge::relations
