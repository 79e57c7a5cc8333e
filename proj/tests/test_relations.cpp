#include <chrono>
#include <random>

#include "doctest.h"
#include "qforge/error.hpp"
#include "qforge/relations/derive.hpp"
#include "support.hpp"

using namespace qforge;
using namespace qforge::relations;
using qforge::testing::random_in;
using qforge::testing::random_rational;

namespace {

RationalFunction V(Var v) { return RationalFunction::variable(v); }

ExactPoint rational_point(const Rational& a, const Rational& b, const Rational& c, const Rational& q,
                          const Rational& x) {
  return make_point(a, b, c, q, x);
}

// Random polynomial in a, b, c, q, x with small exponents (some negative).
Poly random_poly(std::mt19937_64& rng, int terms) {
  std::uniform_int_distribution<int> ex(-1, 2);
  std::vector<Poly::Term> t;
  for (int i = 0; i < terms; ++i) {
    Exponents e{};
    for (int v = 0; v < 5; ++v) e[v] = ex(rng);
    t.emplace_back(Monomial(e), random_rational(rng, 9));
  }
  return Poly::from_terms(std::move(t));
}

ExactPoint random_point(std::mt19937_64& rng) {
  return make_point(random_rational(rng, 97, false), random_rational(rng, 97, false), random_rational(rng, 97, false),
                    random_rational(rng, 97, false), random_rational(rng, 97, false));
}

}  // namespace

TEST_CASE("polynomial text form is canonical") {
  Poly p = Poly::parse("c + (-1)*a*b*x");
  CHECK(p.to_string() == "(-1)*a*b*x + c");
  CHECK(Poly::parse(p.to_string()) == p);
  CHECK(Poly::parse("0").is_zero());
  CHECK(Poly::parse("(1/2)*q^(-2)*x + 3").to_string() == "(3) + (1/2)*q^(-2)*x");
  CHECK_THROWS_AS(Poly::parse("a*z"), Error);
  CHECK_THROWS_AS(Poly::parse(""), Error);
}

TEST_CASE("polynomial ring laws and exact division on random samples") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    Poly f = random_poly(rng, 4), g = random_poly(rng, 3), h = random_poly(rng, 2);
    CHECK(f * (g + h) == f * g + f * h);
    CHECK((f * g) * h == f * (g * h));
    CHECK(f * g == g * f);
    if (!g.is_zero()) {
      auto d = (f * g).divide_exact(g);
      REQUIRE(d.has_value());
      CHECK(*d == f);
    }
    CHECK(Poly::parse(f.to_string()) == f);
  }
  CHECK_FALSE((Poly::variable(Var::a) + Poly(1)).divide_exact(Poly::variable(Var::a) - Poly(1)).has_value());
}

TEST_CASE("rational functions: cancellation and equivalence by evaluation") {
  std::mt19937_64 rng(12);
  int compared = 0;
  for (int i = 0; i < 1000; ++i) {
    RationalFunction f(random_poly(rng, 3), random_poly(rng, 2) + Poly(1));
    Poly gp = random_poly(rng, 2);
    if (gp.is_zero() || f.den().is_zero()) continue;
    RationalFunction g(gp);
    CHECK((f * g) / g == f);
    CHECK(f == f);
    // Same value at 40 random points as the cross-multiplication test says.
    if (i < 25) {
      RationalFunction h = (f * g) / g;
      for (int k = 0; k < 40; ++k) {
        ExactPoint pt = random_point(rng);
        ExactScalar fv, hv;
        try {
          fv = f.evaluate(pt);
          hv = h.evaluate(pt);
        } catch (const Error& e) {
          CHECK(e.kind() == ErrorKind::ZeroDenominator);
          continue;
        }
        CHECK(fv == hv);
        ++compared;
      }
    }
  }
  CHECK(compared > 500);
  RationalFunction f = RationalFunction::parse("(a + (-1)*c)/(a*q + 1)");
  CHECK(RationalFunction::parse(f.to_string()) == f);
  CHECK(f.den().leading().second == 1);
}

TEST_CASE("shift vectors parse and print") {
  CHECK(ShiftVector::parse("1,2,1,-1") == ShiftVector{1, 2, 1, -1});
  CHECK(ShiftVector::parse(" 0, 0 ,0,2") == ShiftVector{0, 0, 0, 2});
  CHECK(ShiftVector{1, 2, 1, -1}.to_string() == "1,2,1,-1");
  CHECK_THROWS_AS(ShiftVector::parse("1,2,3"), Error);
  CHECK_THROWS_AS(ShiftVector::parse("1,2,3,4,5"), Error);
}

TEST_CASE("qr_lookup matches the printed formulas") {
  auto rel = qr_lookup({0, 1, 1, 0});
  auto pt = rational_point(2, 3, 5, Rational(1, 2), 7);
  CHECK(eval_rational_function(rel.Q, pt) == ExactScalar(Rational(37, 3)));
  CHECK(eval_rational_function(rel.R, pt) == ExactScalar(Rational(8, 3)));
  RationalFunction a = V(Var::a), c = V(Var::c), one(1);
  CHECK(rel.R == a * (one - c) / (a - c));

  auto r112 = qr_lookup({1, 2, 1, -1});
  RationalFunction b = V(Var::b), q = V(Var::q), x = V(Var::x);
  CHECK(r112.R == (one - c) * q / ((one - b * q) * (q - x)));

  // R of (0,0,0,2) on b = -a, c = -q.
  auto r2 = qr_lookup({0, 0, 0, 2});
  RationalFunction::Substitution sub;
  sub[static_cast<int>(Var::b)] = -a;
  sub[static_cast<int>(Var::c)] = -q;
  CHECK(r2.R.substitute(sub) == (one - x) / (one - a * a * x));

  CHECK_THROWS_AS(qr_lookup({5, 7, 1, 2}), Error);
  CHECK(eval_rational_function(RationalFunction(1), pt) == ExactScalar(1));
}

TEST_CASE("relation residual") {
  auto pt = rational_point(Rational(1, 3), Rational(1, 5), Rational(1, 7), Rational(1, 2), Rational(1, 4));
  CHECK(relation_residual(qr_lookup({0, 1, 1, 0}), pt, 1e-14) < 1e-12);
  CHECK(relation_residual(qr_lookup({0, 0, 0, 2}), pt, 1e-14) < 1e-12);
  auto bad = qr_lookup({0, 1, 1, 0});
  bad.Q += RationalFunction(1);
  CHECK(relation_residual(bad, pt, 1e-14) > 0.1);
}

TEST_CASE("relation JSON round-trip") {
  for (const auto& s : table_shifts()) {
    auto rel = qr_lookup(s);
    auto back = ThreeTermRelation::from_json(rel.to_json());
    CHECK(back.shift == rel.shift);
    CHECK(back.Q == rel.Q);
    CHECK(back.R == rel.R);
    CHECK(back.to_json() == rel.to_json());
  }
}

TEST_CASE("qr_derive reproduces every tabulated pair") {
  for (const auto& s : table_shifts()) {
    auto t0 = std::chrono::steady_clock::now();
    auto derived = qr_derive(s);
    auto table = qr_lookup(s);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    INFO("shift " << s.to_string() << " took " << secs << " s");
    CHECK(derived.Q == table.Q);
    CHECK(derived.R == table.R);
  }
}

TEST_CASE("qr_derive on the zero shift and on shifts outside the table") {
  auto zero = qr_derive({0, 0, 0, 0});
  CHECK(zero.Q.is_zero());
  CHECK(zero.R == RationalFunction(1));

  std::mt19937_64 rng(13);
  for (ShiftVector s : {ShiftVector{0, 0, 0, 1}, ShiftVector{1, 0, 0, 0}, ShiftVector{0, 0, 1, 0},
                        ShiftVector{-1, 0, 0, 0}, ShiftVector{0, 0, -1, 0}, ShiftVector{0, 0, 0, -1},
                        ShiftVector{1, 1, 2, 0}, ShiftVector{2, 2, 0, 2}}) {
    auto rel = qr_derive(s);
    int checked = 0;
    for (int i = 0; i < 60 && checked < 20; ++i) {
      Rational q = random_in(rng, 0, Rational(1, 2));
      Rational x = random_in(rng, 0, Rational(1, 2));
      for (int j = 0; j < -s.n; ++j) x *= q;
      auto pt = rational_point(random_in(rng, 0, Rational(1, 2)), random_in(rng, 0, Rational(1, 2)),
                               random_in(rng, 0, Rational(1, 2)), q, x);
      double r = 0;
      try {
        r = relation_residual(rel, pt, 1e-14);
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ZeroDenominator);
        continue;
      }
      CHECK(r < 1e-10);
      ++checked;
    }
    CHECK(checked == 20);
  }
}

TEST_CASE("balanced shifts carry the factor c - abx in Q") {
  std::mt19937_64 rng(14);
  for (ShiftVector s : {ShiftVector{0, 1, 1, 0}, ShiftVector{1, 1, 2, 0}, ShiftVector{0, 2, 2, 0},
                        ShiftVector{1, 2, 1, -2}}) {
    auto rel = relation_for(s);
    int zeros = 0;
    for (int i = 0; i < 100 && zeros < 20; ++i) {
      Rational a = random_rational(rng, 97, false), b = random_rational(rng, 97, false),
               c = random_rational(rng, 97, false), q = random_rational(rng, 97, false);
      ExactScalar v;
      try {
        v = eval_rational_function(rel.Q, rational_point(a, b, c, q, c / (a * b)));
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ZeroDenominator);
        continue;
      }
      CHECK(v.is_zero());
      ++zeros;
    }
    CHECK(zeros == 20);
  }
}

TEST_CASE("series matching finds a unique solution and respects the budget") {
  auto m = match_series({0, 1, 1, 0}, Rational(1, 3), Rational(2, 7), Rational(5, 11), Rational(3, 13), 8);
  CHECK(m.degree == 1);
  CHECK_THROWS_AS(match_series({0, 3, 3, 0}, Rational(1, 3), Rational(2, 7), Rational(5, 11), Rational(3, 13), 0),
                  Error);
  DeriveOptions tight;
  tight.degree_budget = 0;
  CHECK_THROWS_AS(qr_derive({0, 2, 2, 0}, tight), Error);
}

TEST_CASE("parameter families") {
  RationalFunction a = V(Var::a), b = V(Var::b), q = V(Var::q), x = V(Var::x), one(1);
  ParamFamily fam(a, b, b * q / a, -q / a);
  CHECK(fam.free_symbols() == std::vector<Var>{Var::a, Var::b});
  CHECK(shift_params(fam, {1, 2, 1, -1}, 1) == fam);
  auto f2 = shift_params(fam, {1, 2, 1, -1}, 2);
  CHECK(f2.a() == a * q);
  CHECK(f2.b() == b * q * q);
  CHECK(f2.c() == b * q * q / a);
  CHECK(f2.x() == -one / a);

  ParamFamily g(a, -a, -q, x);
  auto g3 = shift_params(g, {0, 0, 0, 2}, 3);
  CHECK(g3.a() == a);
  CHECK(g3.b() == -a);
  CHECK(g3.c() == -q);
  CHECK(g3.x() == x * q.pow(4));

  CHECK_THROWS_AS(ParamFamily(one, b, V(Var::c), x), Error);
  CHECK_THROWS_AS(ParamFamily(a, one, V(Var::c), x), Error);
  CHECK_THROWS_AS(ParamFamily(RationalFunction(), b, RationalFunction(), x), Error);
  CHECK_THROWS_AS(ParamFamily(a, RationalFunction(), RationalFunction(), x), Error);
  CHECK_THROWS_AS(ParamFamily(a, b, RationalFunction(), RationalFunction()), Error);
  CHECK_THROWS_AS(ParamFamily(a, b, V(Var::c), RationalFunction()), Error);
  try {
    ParamFamily(one, b, V(Var::c), x);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateFamily);
  }

  ParamFamily z(V(Var::w) * q, b, V(Var::w) * b, one, 4);
  ExactPoint vals = make_point(0, Rational(1, 3), 0, Rational(1, 2), 0);
  ExactPoint pt = z.evaluate(vals);
  CHECK(pt[0] == ExactScalar::root_of_unity(4, 1) * ExactScalar(Rational(1, 2)));
  CHECK(pt[2] == ExactScalar::root_of_unity(4, 1) * ExactScalar(Rational(1, 3)));
}
