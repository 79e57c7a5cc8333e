#pragma once

#include <optional>

#include "qforge/qseries/qpoch.hpp"

namespace qforge::qseries {

template <class Scalar>
struct Phi21Params {
  Scalar a, b, c, q, x;
};

using ExactParams = Phi21Params<ExactScalar>;
using NumericParams = Phi21Params<ApproxScalar>;

inline constexpr int kDefaultTerminationBound = 64;

// Smallest r in [0, bound] with u q^r == 1 exactly.
std::optional<int> exact_q_power_exponent(const ExactScalar& u, const ExactScalar& q,
                                          int bound = kDefaultTerminationBound);

/// Terminating 2phi1 summed exactly, including the extended definition where
/// a or b = q^-r and c = q^-s with r < s: the sum always stops at i = r and every
/// (c;q)_i factor is checked to be nonzero before it is divided out.
///
/// Throws NotTerminating when neither a nor b is q^-r with r <= bound, and
/// ZeroDenominator when a retained (q;q)_i (c;q)_i vanishes.
ExactSeries phi21_exact(const ExactParams& p, int termination_bound = kDefaultTerminationBound);

struct NumericOptions {
  int termination_bound = kDefaultTerminationBound;
  int max_terms = 200000;
  int growth_limit = 32;
};

/// Adaptive truncated sum. Stops after three consecutive terms below
/// tol * (|partial| + 1); certified when a geometric ratio bound rho < 1 holds from
/// the stopping index, in which case err includes |last| rho / (1 - rho).
NumericSeries phi21_numeric(const NumericParams& p, double tol, const NumericOptions& options = {});

NumericParams to_numeric(const ExactParams& p, mpfr_prec_t precision = 0);

}  // namespace qforge::qseries
