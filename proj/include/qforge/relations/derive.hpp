#pragma once

#include <cstdint>

#include "qforge/relations/relation.hpp"

namespace qforge::relations {

struct DeriveOptions {
  int degree_budget = 8;
  int specializations = 5;     // random (a,b,c,q) points for the series-matching check
  int residual_points = 20;    // random points for the numeric residual check
  double residual_tol = 1e-20; // relative to the size of the three terms
  std::uint64_t seed = 20240601;
};

/// Derives (Q, R) for an arbitrary shift.
///
/// The pair is assembled symbolically by composing elementary contiguous steps
/// (a, b, c, x moved by one power of q at a time) acting on the basis
/// (phi(x), phi(xq)). It is then checked against power-series matching at random
/// rational specializations of (a,b,c,q): the smallest x-degree d with a
/// one-dimensional solution space must reproduce the symbolic pair. A numeric
/// residual check closes the derivation.
///
/// Errors: BudgetExceeded when no d <= degree_budget gives a unique solution;
/// VerificationFailed when the matched solution or the residual disagrees.
ThreeTermRelation qr_derive(const ShiftVector& s, const DeriveOptions& options = {});
inline ThreeTermRelation qr_derive(const ShiftVector& s, int degree_budget) {
  DeriveOptions o;
  o.degree_budget = degree_budget;
  return qr_derive(s, o);
}

// The symbolic composition alone, without the checks.
ThreeTermRelation compose_relation(const ShiftVector& s);

// Series-matching solve at one specialization, matching coefficients up to
// order_multiplier * (3(d+1) + 8). Returns the x-degree d used and P0, P1, P2 as
// polynomials in x, or throws BudgetExceeded.
struct MatchedRelation {
  int degree;
  Poly P0, P1, P2;
};
MatchedRelation match_series(const ShiftVector& s, const Rational& a, const Rational& b, const Rational& c,
                             const Rational& q, int degree_budget, int order_multiplier = 1);

// (Q, R) from qr_lookup when tabulated, else from qr_derive.
ThreeTermRelation relation_for(const ShiftVector& s);

}  // namespace qforge::relations
