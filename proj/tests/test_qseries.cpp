#include <cmath>

#include "doctest.h"
#include "qforge/error.hpp"
#include "qforge/qseries/closed_form.hpp"
#include "qforge/qseries/phi21.hpp"
#include "support.hpp"

using namespace qforge;
using namespace qforge::qseries;

namespace {

ExactScalar R(long p, long q = 1) { return ExactScalar(Rational(p, q)); }
ApproxScalar A(long p, long q = 1) { return ApproxScalar::from_exact(R(p, q)); }

// Independent term-by-term reference: each term rebuilt from full products.
ExactScalar phi21_reference(const ExactParams& p, int terms) {
  ExactScalar s(0);
  for (int i = 0; i < terms; ++i)
    s += qpoch_finite(p.a, p.q, i) * qpoch_finite(p.b, p.q, i) /
         (qpoch_finite(p.q, p.q, i) * qpoch_finite(p.c, p.q, i)) * p.x.pow(i);
  return s;
}

ExactParams kummer_family(const ExactScalar& a, const ExactScalar& b, const ExactScalar& q) {
  return ExactParams{a, b, b * q / a, q, -q / a};
}

}  // namespace

TEST_CASE("qpoch_finite") {
  CHECK(qpoch_finite(R(7, 3), R(5), 0) == R(1));
  CHECK(qpoch_finite(R(1, 2), R(1, 2), 2) == R(3, 8));
  CHECK(qpoch_finite(R(4), R(1, 2), 2) == R(3));
}

TEST_CASE("qpoch_finite recurrence") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    ExactScalar base = testing::random_rational(rng), q = testing::random_rational(rng);
    int i = static_cast<int>(rng() % 33);
    REQUIRE(qpoch_finite(base, q, i + 1) == qpoch_finite(base, q, i) * (1 - base * q.pow(i)));
  }
}

TEST_CASE("qpoch_infinite") {
  auto one = qpoch_infinite(A(0), A(1, 2), 1e-30);
  CHECK(one.value.re == Real(1.0));
  CHECK(one.certified);

  auto zero = qpoch_infinite(A(1), A(1, 3), 1e-30);
  CHECK(zero.value.magnitude_d() == 0.0);

  auto half = qpoch_infinite(A(1, 2), A(1, 2), 1e-12);
  CHECK(half.certified);
  CHECK(std::abs(half.value.re.to_double() - 0.28878809508660242) < 1e-12);
  CHECK(half.value.err <= 1e-12);

  CHECK_THROWS_AS(qpoch_infinite(A(1, 2), A(1), 1e-12), Error);
}

TEST_CASE("qpoch_infinite splitting") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    ExactScalar base = testing::random_rational(rng, 20);
    ExactScalar q = testing::random_in(rng, Rational(-9, 10), Rational(9, 10));
    int n = static_cast<int>(rng() % 17);
    ApproxScalar ab = ApproxScalar::from_exact(base), aq = ApproxScalar::from_exact(q);
    auto whole = qpoch_infinite(ab, aq, 1e-25);
    auto tail = qpoch_infinite(ab * aq.pow(n), aq, 1e-25);
    ApproxScalar split = qpoch_finite(ab, aq, n) * tail.value;
    CHECK(distance(whole.value, split) <= whole.value.err + split.err + 1e-30);
  }
}

TEST_CASE("phi21_exact terminating examples") {
  ExactScalar q = R(1, 2);
  // b = q^0 = 1 collapses the sum to its first term.
  CHECK(phi21_exact(ExactParams{R(3), R(1), R(1, 7), q, R(5)}).value == R(1));

  // a = q^{M+2}, b = q^{-2N-1}, M = 0, N = 1.
  auto sv2 = phi21_exact(kummer_family(q.pow(2), q.pow(-3), q));
  CHECK(sv2.value.is_zero());
  CHECK(sv2.terminated);
  CHECK(sv2.certified);
  CHECK(sv2.terms_used == 4);

  // a = q^{M+2}, b = q^{-2N}: value 5/7, also (1+1/4)(1-1/2)/(1-1/8).
  auto sv1 = phi21_exact(kummer_family(q.pow(2), q.pow(-2), q));
  CHECK(sv1.value == R(5, 7));
  CHECK(sv1.value == R(5, 4) * R(1, 2) / R(7, 8));
}

TEST_CASE("phi21_exact errors") {
  ExactScalar q = R(1, 2);
  CHECK_THROWS_AS(phi21_exact(ExactParams{R(1, 3), R(1, 5), R(1, 7), q, R(1, 2)}), Error);
  try {
    phi21_exact(ExactParams{R(1, 3), R(1, 5), R(1, 7), q, R(1, 2)});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotTerminating);
  }
  // b = q^-3, c = q^-1: (c;q)_2 = 0 while the sum runs to i = 3.
  try {
    phi21_exact(ExactParams{R(1, 3), q.pow(-3), q.pow(-1), q, R(1, 2)});
    FAIL("expected ZeroDenominator");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroDenominator);
  }
  // Termination beyond the bound is reported as non-terminating.
  CHECK_THROWS_AS(phi21_exact(ExactParams{q.pow(-70), R(1, 5), R(1, 7), q, R(1, 2)}), Error);
  CHECK_NOTHROW(phi21_exact(ExactParams{q.pow(-70), R(1, 5), R(1, 7), q, R(1, 2)}, 80));
}

TEST_CASE("phi21_exact exceptional case keeps r+1 terms") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    ExactScalar q = testing::random_in(rng, Rational(1, 10), Rational(9, 10));
    int r = static_cast<int>(rng() % 6);
    int s = r + 1 + static_cast<int>(rng() % 5);
    ExactScalar a = testing::random_rational(rng, 20, false);
    if (exact_q_power_exponent(a, q)) continue;
    ExactScalar x = testing::random_rational(rng, 20);
    ExactParams p{a, q.pow(-r), q.pow(-s), q, x};
    auto v = phi21_exact(p);
    CHECK(v.terms_used == r + 1);
    CHECK(v.value == phi21_reference(p, r + 1));
  }
}

TEST_CASE("phi21 symmetry in a and b") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 1000; ++trial) {
    ExactScalar q = testing::random_in(rng, Rational(1, 10), Rational(9, 10), 20);
    int r = static_cast<int>(rng() % 6);
    ExactScalar a = testing::random_rational(rng, 20, false);
    ExactScalar c = testing::random_rational(rng, 20, false);
    ExactScalar x = testing::random_rational(rng, 20);
    ExactParams p{a, q.pow(-r), c, q, x};
    ExactParams swapped{q.pow(-r), a, c, q, x};
    ExactScalar v1, v2;
    try {
      v1 = phi21_exact(p).value;
    } catch (const Error& e) {
      REQUIRE(e.kind() == ErrorKind::ZeroDenominator);
      CHECK_THROWS_AS(phi21_exact(swapped), Error);
      continue;
    }
    v2 = phi21_exact(swapped).value;
    REQUIRE(v1 == v2);
  }
}

TEST_CASE("phi21_numeric") {
  NumericParams zero_x{A(1, 3), A(1, 5), A(1, 7), A(1, 2), A(0)};
  auto v0 = phi21_numeric(zero_x, 1e-20);
  CHECK(v0.value.re == Real(1.0));

  // q-binomial theorem: c = b cancels.
  NumericParams qb{A(1, 3), A(1, 5), A(1, 5), A(1, 2), A(1, 2)};
  auto vb = phi21_numeric(qb, 1e-15);
  auto rhs = qpoch_infinite(A(1, 6), A(1, 2), 1e-20).value / qpoch_infinite(A(1, 2), A(1, 2), 1e-20).value;
  CHECK(distance(vb.value, rhs) < 1e-12);
  CHECK(vb.certified);
  CHECK(vb.value.err < 1e-12);
  CHECK(std::abs(vb.value.re.to_double() - 2.4307747467651596) < 1e-12);

  // q-Gauss at x = c/(ab).
  NumericParams qg{A(1, 2), A(1, 3), A(1, 20), A(1, 2), A(3, 10)};
  auto vg = phi21_numeric(qg, 1e-15);
  ApproxScalar g = qpoch_infinite(A(1, 10), A(1, 2), 1e-20).value * qpoch_infinite(A(3, 20), A(1, 2), 1e-20).value /
                   (qpoch_infinite(A(1, 20), A(1, 2), 1e-20).value * qpoch_infinite(A(3, 10), A(1, 2), 1e-20).value);
  CHECK(distance(vg.value, g) < 1e-12);
  CHECK(std::abs(vg.value.re.to_double() - 9.0 / 7.0) < 1e-12);
}

TEST_CASE("phi21_numeric errors") {
  CHECK_THROWS_AS(phi21_numeric(NumericParams{A(1, 3), A(1, 5), A(1, 7), A(1), A(1, 2)}, 1e-12), Error);
  try {
    phi21_numeric(NumericParams{A(1, 3), A(1, 5), A(1, 7), A(1, 2), A(3, 2)}, 1e-12);
    FAIL("expected InvalidDomain");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidDomain);
  }
  // c = q^-1 hits a zero denominator at i = 2.
  try {
    phi21_numeric(NumericParams{A(1, 3), A(1, 5), A(2), A(1, 2), A(1, 2)}, 1e-12);
    FAIL("expected ZeroDenominator");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroDenominator);
  }
}

TEST_CASE("phi21 numeric agrees with exact on terminating parameters") {
  std::mt19937_64 rng(15);
  const double tol = 1e-20;
  int compared = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    ExactScalar q = testing::random_in(rng, Rational(-9, 10), Rational(9, 10), 30);
    if (q.is_zero()) continue;
    int r = static_cast<int>(rng() % 8);
    ExactParams p{testing::random_rational(rng, 10, false), q.pow(-r), testing::random_rational(rng, 10, false), q,
                  testing::random_rational(rng, 10)};
    ExactScalar exact;
    try {
      exact = phi21_exact(p).value;
    } catch (const Error&) {
      continue;
    }
    auto num = phi21_numeric(to_numeric(p, 256), tol);
    ApproxScalar ref = ApproxScalar::from_exact(exact, 256);
    double scale = std::max(1.0, ref.magnitude_d());
    REQUIRE(distance(num.value, ref) <= 10 * tol * scale);
    ++compared;
  }
  CHECK(compared >= 800);
}

TEST_CASE("phi21_numeric symmetry in a and b") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 1000; ++trial) {
    ExactScalar q = testing::random_in(rng, Rational(1, 10), Rational(3, 5), 20);
    ExactScalar a = testing::random_in(rng, Rational(-1), Rational(1), 20);
    ExactScalar b = testing::random_in(rng, Rational(-1), Rational(1), 20);
    ExactScalar c = testing::random_in(rng, Rational(-1, 2), Rational(1, 2), 20);
    ExactScalar x = testing::random_in(rng, Rational(-1, 2), Rational(1, 2), 20);
    auto v1 = phi21_numeric(to_numeric(ExactParams{a, b, c, q, x}), 1e-20);
    auto v2 = phi21_numeric(to_numeric(ExactParams{b, a, c, q, x}), 1e-20);
    REQUIRE(distance(v1.value, v2.value) <= 1e-18 * std::max(1.0, v1.value.magnitude_d()));
  }
}

TEST_CASE("IntExpr arithmetic and JSON") {
  IntExpr n = IntExpr::symbol("N");
  IntExpr tri = (n * (n + 1)).divided_by(2);
  Bindings b{{"N", R(4)}};
  CHECK(tri.evaluate(b) == 10);
  CHECK(IntExpr::from_json(tri.to_json()) == tri);
  CHECK(IntExpr::from_json(tri.to_json()).to_json() == tri.to_json());
  CHECK(IntExpr::from_json(3).evaluate({}) == 3);
  CHECK_THROWS_AS(IntExpr::symbol("M").evaluate(b), Error);
  CHECK_THROWS_AS(n.evaluate(Bindings{{"N", R(1, 2)}}), Error);
}

TEST_CASE("closed_form_eval") {
  using E = ClosedFormExpr;
  IntExpr M = IntExpr::symbol("M"), N = IntExpr::symbol("N");
  Bindings b{{"q", R(1, 2)}, {"M", R(0)}, {"N", R(1)}};

  CHECK(closed_form_eval_exact(E::qpoch(E::sym("q"), 1, IntExpr(0)), b) == R(1));

  // (-q^{M+2};q)_N (q;q^2)_N / (q^{M+N+2};q)_N
  E sv1 = E::div(E::mul({E::qpoch(E::mul({E::lit(R(-1)), E::qpow(M + 2)}), 1, N), E::qpoch(E::sym("q"), 2, N)}),
                 E::qpoch(E::qpow(M + N + 2), 1, N));
  CHECK(closed_form_eval_exact(sv1, b) == R(5, 7));

  // (1 - w^{N+1})/(1 - w) (q^{-N};q)_N / (w q^{-N};q)_N
  ExactScalar w = ExactScalar::root_of_unity(3);
  E sv4 = E::mul({E::div(E::sub(E::lit(1), E::pow(E::sym("w"), N + 1)), E::sub(E::lit(1), E::sym("w"))),
                  E::div(E::qpoch(E::qpow(IntExpr(0) - N), 1, N),
                         E::qpoch(E::mul({E::sym("w"), E::qpow(IntExpr(0) - N)}), 1, N))});
  Bindings bw{{"q", R(1, 2)}, {"N", R(1)}, {"w", w}};
  CHECK(closed_form_eval_exact(sv4, bw) == -(1 + 3 * w) / ExactScalar(7));
  std::complex<double> z = std::polar(1.0, 2.0 * M_PI / 3.0);
  std::complex<double> fz = (1.0 - z * z) / (1.0 - z) * (1.0 - 2.0) / (1.0 - 2.0 * z);
  CHECK(std::abs(closed_form_eval_exact(sv4, bw).to_complex() - fz) < 1e-12);

  // JSON round-trip preserves structure and value.
  E back = E::from_json(sv4.to_json());
  CHECK(back.to_json() == sv4.to_json());
  CHECK(closed_form_eval_exact(back, bw) == closed_form_eval_exact(sv4, bw));

  // Infinite factors only evaluate numerically.
  E inf = E::qpoch(E::sym("x"), 1, std::nullopt);
  Bindings bx{{"q", R(1, 2)}, {"x", R(1, 2)}};
  CHECK_THROWS_AS(closed_form_eval_exact(inf, bx), Error);
  CHECK(std::abs(closed_form_eval_numeric(inf, bx, 1e-20).re.to_double() - 0.28878809508660242) < 1e-15);
  Bindings bad{{"q", R(3, 2)}, {"x", R(1, 2)}};
  CHECK_THROWS_AS(closed_form_eval_numeric(inf, bad, 1e-20), Error);

  E zero_den = E::div(E::lit(1), E::qpoch(E::qpow(IntExpr(-1)), 1, IntExpr(2)));
  try {
    closed_form_eval_exact(zero_den, bx);
    FAIL("expected ZeroDenominator");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroDenominator);
  }
}
