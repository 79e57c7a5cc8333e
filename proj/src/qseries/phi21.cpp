#include "qforge/qseries/phi21.hpp"

#include <cmath>
#include <limits>

#include "qforge/error.hpp"

namespace qforge::qseries {

std::optional<int> exact_q_power_exponent(const ExactScalar& u, const ExactScalar& q, int bound) {
  ExactScalar v = u;
  for (int r = 0; r <= bound; ++r) {
    if (v.is_one()) return r;
    v *= q;
  }
  return std::nullopt;
}

namespace {

std::optional<int> termination_index(const ExactParams& p, int bound) {
  auto ra = exact_q_power_exponent(p.a, p.q, bound);
  auto rb = exact_q_power_exponent(p.b, p.q, bound);
  if (ra && rb) return std::min(*ra, *rb);
  return ra ? ra : rb;
}

}  // namespace

ExactSeries phi21_exact(const ExactParams& p, int termination_bound) {
  auto r = termination_index(p, termination_bound);
  if (!r) throw Error(ErrorKind::NotTerminating, "neither a nor b is q^-r with r <= " +
                                                     std::to_string(termination_bound));
  ExactScalar term(1);
  ExactScalar sum(1);
  ExactScalar qi(1);  // q^i
  for (int i = 0; i < *r; ++i) {
    ExactScalar den = (ExactScalar(1) - qi * p.q) * (ExactScalar(1) - p.c * qi);
    if (den.is_zero())
      throw Error(ErrorKind::ZeroDenominator, "(q;q)_i (c;q)_i vanishes at i = " + std::to_string(i + 1));
    term *= (ExactScalar(1) - p.a * qi) * (ExactScalar(1) - p.b * qi) * p.x;
    term /= den;
    sum += term;
    qi *= p.q;
  }
  return ExactSeries{std::move(sum), *r + 1, true, true};
}

NumericParams to_numeric(const ExactParams& p, mpfr_prec_t precision) {
  return NumericParams{ApproxScalar::from_exact(p.a, precision), ApproxScalar::from_exact(p.b, precision),
                       ApproxScalar::from_exact(p.c, precision), ApproxScalar::from_exact(p.q, precision),
                       ApproxScalar::from_exact(p.x, precision)};
}

namespace {

double near_zero_threshold(const NumericParams& p) { return 1024.0 * unit_roundoff(p.q.precision()); }

// Smallest r with |1 - u q^r| negligible, used as the float analogue of exact detection.
std::optional<int> numeric_termination(const ApproxScalar& u, const ApproxScalar& q, int bound, double eps) {
  ApproxScalar v = u;
  for (int r = 0; r <= bound; ++r) {
    if ((ApproxScalar(1) - v).magnitude_d() <= eps) return r;
    v *= q;
  }
  return std::nullopt;
}

}  // namespace

NumericSeries phi21_numeric(const NumericParams& p, double tol, const NumericOptions& options) {
  const double q_abs = p.q.magnitude_d();
  if (!(q_abs < 1.0)) throw Error(ErrorKind::InvalidDomain, "2phi1 requires |q| < 1");
  const double eps = near_zero_threshold(p);
  auto ra = numeric_termination(p.a, p.q, options.termination_bound, eps);
  auto rb = numeric_termination(p.b, p.q, options.termination_bound, eps);
  std::optional<int> r = ra && rb ? std::optional<int>(std::min(*ra, *rb)) : (ra ? ra : rb);
  const double x_abs = p.x.magnitude_d();
  if (!r && !(x_abs < 1.0)) throw Error(ErrorKind::InvalidDomain, "non-terminating 2phi1 requires |x| < 1");

  const bool inputs_certified = p.a.certified && p.b.certified && p.c.certified && p.q.certified && p.x.certified;
  ApproxScalar term(1);
  ApproxScalar sum(1);
  ApproxScalar qi(1);
  int small_run = 0;
  int growth_run = 0;
  double last_abs = 1.0;
  int i = 0;
  const int limit = r ? *r : options.max_terms;
  for (; i < limit; ++i) {
    ApproxScalar c_factor = ApproxScalar(1) - p.c * qi;
    ApproxScalar q_factor = ApproxScalar(1) - qi * p.q;
    if (c_factor.magnitude_d() <= eps || q_factor.magnitude_d() <= eps)
      throw Error(ErrorKind::ZeroDenominator, "(q;q)_i (c;q)_i vanishes at i = " + std::to_string(i + 1));
    term *= (ApproxScalar(1) - p.a * qi) * (ApproxScalar(1) - p.b * qi) * p.x;
    term /= q_factor * c_factor;
    sum += term;
    qi *= p.q;
    if (r) continue;

    double t_abs = term.magnitude_d();
    double s_abs = sum.magnitude_d();
    small_run = t_abs < tol * (s_abs + 1.0) ? small_run + 1 : 0;
    growth_run = t_abs > last_abs ? growth_run + 1 : 0;
    last_abs = t_abs;
    if (growth_run >= options.growth_limit)
      throw Error(ErrorKind::NoConvergence, "term growth for " + std::to_string(options.growth_limit) + " terms");
    if (small_run >= 3) {
      ++i;
      break;
    }
  }
  if (r) {
    sum.certified = inputs_certified;
    return NumericSeries{std::move(sum), *r + 1, true, inputs_certified};
  }
  if (i >= options.max_terms) throw Error(ErrorKind::NoConvergence, "2phi1 did not converge within term limit");

  // Geometric tail certificate. From index j on, the term ratio is bounded by
  // |x| (1 + |a||q|^j)(1 + |b||q|^j) / ((1 - |q|^{j+1})(1 - |c||q|^j)), decreasing in j.
  const double qj = std::pow(q_abs, i);
  const double c_tail = p.c.magnitude_d() * qj;
  bool certified = false;
  double tail = 0.0;
  if (c_tail < 1.0) {
    double rho = x_abs * (1.0 + p.a.magnitude_d() * qj) * (1.0 + p.b.magnitude_d() * qj) /
                 ((1.0 - qj * q_abs) * (1.0 - c_tail));
    if (rho < 1.0) {
      certified = inputs_certified;
      tail = last_abs * rho / (1.0 - rho);
    }
  }
  if (!certified) tail = last_abs;  // heuristic estimate
  sum.err += tail;
  sum.certified = certified;
  return NumericSeries{std::move(sum), i + 1, false, certified};
}

}  // namespace qforge::qseries
