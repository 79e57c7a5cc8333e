#include <cmath>
#include <complex>

#include "doctest.h"
#include "qforge/error.hpp"
#include "qforge/exact/approx.hpp"
#include "qforge/exact/cyclotomic.hpp"
#include "support.hpp"

using namespace qforge;

namespace {

ExactScalar zeta(int n) { return ExactScalar::root_of_unity(n); }

}  // namespace

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic_polynomial(1) == std::vector<Rational>{-1, 1});
  CHECK(cyclotomic_polynomial(3) == std::vector<Rational>{1, 1, 1});
  CHECK(cyclotomic_polynomial(4) == std::vector<Rational>{1, 0, 1});
  CHECK(cyclotomic_polynomial(6) == std::vector<Rational>{1, -1, 1});
  CHECK(cyclotomic_polynomial(12) == std::vector<Rational>{1, 0, -1, 0, 1});
  for (int n = 1; n <= 30; ++n) CHECK(static_cast<int>(cyclotomic_polynomial(n).size()) - 1 == euler_phi(n));
}

TEST_CASE("cyclo_normalize reduces modulo Phi_n") {
  std::vector<Rational> one_z_z2{1, 1, 1};
  CHECK(cyclo_normalize(one_z_z2, 3).is_zero());

  std::vector<Rational> z2{0, 0, 1};
  CHECK(cyclo_normalize(z2, 4) == ExactScalar(-1));

  ExactScalar w = zeta(3);
  ExactScalar v = ((1 - w * w) / (1 - w)) * ExactScalar(-1) / (1 - 2 * w);
  ExactScalar expected = -(1 + 3 * w) / ExactScalar(7);
  CHECK(v == expected);
  CHECK(v.to_string() == "cyclo(3)[-1/7, -3/7]");
  // Float cross-check at exp(2 pi i / 3).
  std::complex<double> z = std::polar(1.0, 2.0 * M_PI / 3.0);
  std::complex<double> fv = ((1.0 - z * z) / (1.0 - z)) * -1.0 / (1.0 - 2.0 * z);
  CHECK(std::abs(v.to_complex() - fv) < 1e-12);
}

TEST_CASE("cyclo_normalize is idempotent and a ring homomorphism") {
  std::mt19937_64 rng(7);
  for (int order : {3, 4, 5, 6, 7, 12}) {
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Rational> p(2 * order + 1), r(order + 2);
      for (auto& c : p) c = testing::random_rational(rng, 9);
      for (auto& c : r) c = testing::random_rational(rng, 9);
      ExactScalar np = cyclo_normalize(p, order);
      CHECK(cyclo_normalize(np.coeffs(), order) == np);
      // product of residues equals the residue of the product
      std::vector<Rational> prod(p.size() + r.size() - 1);
      for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < r.size(); ++j) prod[i + j] += p[i] * r[j];
      CHECK(cyclo_normalize(prod, order) == np * cyclo_normalize(r, order));
      std::vector<Rational> sum(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) sum[i] = p[i] + (i < r.size() ? r[i] : Rational(0));
      CHECK(cyclo_normalize(sum, order) == np + cyclo_normalize(r, order));
    }
  }
}

TEST_CASE("field_div") {
  ExactScalar w = zeta(3);
  ExactScalar inv = field_div(ExactScalar(1), 1 - w);
  CHECK(inv == (2 + w) / ExactScalar(3));
  CHECK(inv * (1 - w) == ExactScalar(1));
  ExactScalar x = 3 * w - ExactScalar(Rational(1, 2));
  CHECK(field_div(x, ExactScalar(1)) == x);
  CHECK_THROWS_AS(field_div(ExactScalar(1), ExactScalar(0)), Error);
  try {
    field_div(ExactScalar(1), w - w);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DivisionByZero);
  }
}

TEST_CASE("field axioms on random samples") {
  std::mt19937_64 rng(20240601);
  for (int order : {1, 3, 4, 5, 6}) {
    CAPTURE(order);
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      ExactScalar x = testing::random_cyclo(rng, order);
      ExactScalar y = testing::random_cyclo(rng, order);
      ExactScalar z = testing::random_cyclo(rng, order);
      REQUIRE((x * y) * z == x * (y * z));
      REQUIRE((x + y) + z == x + (y + z));
      REQUIRE(x * (y + z) == x * y + x * z);
      REQUIRE(x * y == y * x);
      if (!x.is_zero()) {
        REQUIRE(x * x.inverse() == ExactScalar(1));
        REQUIRE(field_div(y, x) * x == y);
      }
      ++checked;
    }
    CHECK(checked == 1000);
  }
}

TEST_CASE("mixed orders embed into the lcm") {
  ExactScalar w3 = zeta(3), i4 = zeta(4);
  ExactScalar s = w3 + i4;
  CHECK(s.order() == 12);
  CHECK(std::abs(s.to_complex() - (w3.to_complex() + i4.to_complex())) < 1e-12);
  CHECK(zeta(6).pow(2) == w3);
  CHECK(zeta(4).pow(2) == ExactScalar(-1));
  CHECK(w3.pow(3) == ExactScalar(1));
  CHECK(w3.pow(-1) == w3 * w3);
  CHECK(ExactScalar(Rational(5, 3)) == ExactScalar(Rational(5, 3)).embed(6));
}

TEST_CASE("scalar text format round-trips bit-exactly") {
  std::mt19937_64 rng(99);
  for (int order : {1, 3, 4, 5, 8}) {
    for (int trial = 0; trial < 50; ++trial) {
      ExactScalar x = testing::random_cyclo(rng, order, 1000);
      std::string text = x.to_string();
      ExactScalar back = ExactScalar::parse(text);
      CHECK(back == x);
      CHECK(back.to_string() == text);
    }
  }
  CHECK(ExactScalar::parse("-6/4").to_string() == "-3/2");
  CHECK(ExactScalar::parse("cyclo(3)[1, 1, 1]").is_zero());
  CHECK_THROWS_AS(ExactScalar::parse("1/0"), Error);
  CHECK_THROWS_AS(ExactScalar::parse("abc"), Error);
  CHECK_THROWS_AS(ExactScalar::parse("cyclo(3)[1,"), Error);
}

TEST_CASE("embedding agrees with ApproxScalar arithmetic") {
  std::mt19937_64 rng(5);
  for (int order : {3, 4, 5, 6}) {
    for (int trial = 0; trial < 100; ++trial) {
      ExactScalar x = testing::random_cyclo(rng, order);
      ExactScalar y = testing::random_cyclo(rng, order);
      if (y.is_zero()) continue;
      ExactScalar exact = (x * y + x) / y;
      ApproxScalar ax = ApproxScalar::from_exact(x), ay = ApproxScalar::from_exact(y);
      ApproxScalar approx = (ax * ay + ax) / ay;
      ApproxScalar reference = ApproxScalar::from_exact(exact);
      CHECK(approx.certified);
      CHECK(distance(approx, reference) <= approx.err + reference.err);
    }
  }
}

TEST_CASE("Real precision defaults to 113 bits") {
  Real r;
  CHECK(r.precision() == Real::default_precision());
  Real third(Rational(1, 3), 200);
  CHECK(third.precision() == 200);
  CHECK(std::abs((third * Real(3.0)).to_double() - 1.0) < 1e-15);
}
