#pragma once

#include "qforge/exact/approx.hpp"
#include "qforge/exact/cyclotomic.hpp"

namespace qforge::qseries {

template <class Scalar>
struct SeriesValue {
  Scalar value;
  int terms_used = 0;
  bool terminated = false;
  bool certified = false;
};

using ExactSeries = SeriesValue<ExactScalar>;
using NumericSeries = SeriesValue<ApproxScalar>;

// prod_{j=0}^{count-1} (1 - base q^j); empty product is 1.
template <class Scalar>
Scalar qpoch_finite(const Scalar& base, const Scalar& q, long count) {
  Scalar out(1);
  Scalar factor = base;
  for (long j = 0; j < count; ++j) {
    out *= Scalar(1) - factor;
    if (j + 1 < count) factor *= q;
  }
  return out;
}

// (base; q)_inf truncated where the tail bound exp(|base||q|^M / (1-|q|)) - 1,
// scaled by the partial product, drops below tol. Throws InvalidDomain for |q| >= 1.
NumericSeries qpoch_infinite(const ApproxScalar& base, const ApproxScalar& q, double tol);

}  // namespace qforge::qseries
