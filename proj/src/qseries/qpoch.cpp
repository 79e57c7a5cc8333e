#include "qforge/qseries/qpoch.hpp"

#include <cmath>

#include "qforge/error.hpp"

namespace qforge::qseries {

NumericSeries qpoch_infinite(const ApproxScalar& base, const ApproxScalar& q, double tol) {
  double q_abs = q.magnitude_d() + q.err;
  if (!(q_abs < 1.0)) throw Error(ErrorKind::InvalidDomain, "(base; q)_inf requires |q| < 1");
  NumericSeries out{ApproxScalar(1), 0, false, base.certified && q.certified};
  if (base.is_exact_zero()) {
    out.terminated = true;
    out.value.err = base.err;
    return out;
  }
  double base_abs = base.magnitude_d() + base.err;
  ApproxScalar factor = base;
  for (int m = 0; m < 100000; ++m) {
    double tail_log = base_abs * std::pow(q_abs, m) / (1.0 - q_abs);
    double partial = out.value.magnitude_d();
    double bound = std::expm1(tail_log) * partial;
    if (bound <= tol || partial == 0.0) {
      out.terms_used = m;
      out.value.err += partial == 0.0 ? 0.0 : bound;
      out.value.certified = out.certified;
      if (partial == 0.0) out.terminated = true;
      return out;
    }
    out.value *= ApproxScalar(1) - factor;
    factor *= q;
  }
  throw Error(ErrorKind::NoConvergence, "(base; q)_inf did not reach tolerance");
}

}  // namespace qforge::qseries
