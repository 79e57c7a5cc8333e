#pragma once

#include <array>
#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qforge/qseries/phi21.hpp"
#include "qforge/relations/rational_function.hpp"

namespace qforge::relations {

/// Integer shift (k,l,m,n) of (a,b,c,x) by powers of q.
struct ShiftVector {
  int k = 0, l = 0, m = 0, n = 0;

  bool is_zero() const { return k == 0 && l == 0 && m == 0 && n == 0; }
  std::array<int, 4> as_array() const { return {k, l, m, n}; }
  std::string to_string() const;  // "k,l,m,n"
  static ShiftVector parse(std::string_view text);

  friend auto operator<=>(const ShiftVector&, const ShiftVector&) = default;
};

/// phi(aq^k, bq^l; cq^m; q, xq^n) = Q phi(aq, bq; cq; q, x) + R phi(a, b; c; q, x).
struct ThreeTermRelation {
  ShiftVector shift;
  RationalFunction Q;
  RationalFunction R;

  nlohmann::json to_json() const;
  static ThreeTermRelation from_json(const nlohmann::json& j);
};

// Values for (a, b, c, q, x, w), indexed by Var.
using ExactPoint = std::array<ExactScalar, kNumVars>;
using NumericPoint = std::array<ApproxScalar, kNumVars>;

ExactPoint make_point(const ExactScalar& a, const ExactScalar& b, const ExactScalar& c, const ExactScalar& q,
                      const ExactScalar& x);
NumericPoint to_numeric(const ExactPoint& p, mpfr_prec_t precision = 0);

/// Assignment of each of a, b, c, x to a rational function of free symbols and q.
/// The symbol w, when used, denotes the primitive root of unity of order `root_order`.
class ParamFamily {
 public:
  ParamFamily(RationalFunction a, RationalFunction b, RationalFunction c, RationalFunction x, int root_order = 1);

  const RationalFunction& a() const { return slots_[0]; }
  const RationalFunction& b() const { return slots_[1]; }
  const RationalFunction& c() const { return slots_[2]; }
  const RationalFunction& x() const { return slots_[3]; }
  const std::array<RationalFunction, 4>& slots() const { return slots_; }
  int root_order() const { return root_order_; }

  // Symbols other than q and w that occur in the assignment, in Var order.
  std::vector<Var> free_symbols() const;

  // Evaluates the assignment; only the free symbols and q of `values` are read.
  ExactPoint evaluate(const ExactPoint& values) const;

  // Substitution sending a, b, c, x to the family's expressions.
  RationalFunction::Substitution substitution() const;

  std::string to_string() const;  // "(a, b, (b*q)/(a), ...)"
  friend bool operator==(const ParamFamily&, const ParamFamily&) = default;

 private:
  std::array<RationalFunction, 4> slots_;
  int root_order_;
};

bool in_table(const ShiftVector& s);
const std::vector<ShiftVector>& table_shifts();

// Transcribed (Q, R) for the five tabulated shifts; NotInTable otherwise.
ThreeTermRelation qr_lookup(const ShiftVector& s);

// (a, b, c, x) -> (a q^{k(step-1)}, b q^{l(step-1)}, c q^{m(step-1)}, x q^{n(step-1)}).
ParamFamily shift_params(const ParamFamily& fam, const ShiftVector& s, int step);

ExactScalar eval_rational_function(const RationalFunction& f, const ExactPoint& point);

// |phi_shifted - Q phi_up - R phi_base| at a point with real rational coordinates.
double relation_residual(const ThreeTermRelation& rel, const ExactPoint& point, double tol);

// Parameters of phi(aq^k, bq^l; cq^m; q, xq^n) at the point.
qseries::ExactParams shifted_params(const ExactPoint& point, const ShiftVector& s);

}  // namespace qforge::relations
