#include "qforge/relations/derive.hpp"

#include <map>
#include <mutex>
#include <random>

#include "qforge/error.hpp"
#include "qforge/exact/sampling.hpp"

namespace qforge::relations {

namespace {

// ---------------------------------------------------------------- symbolic composition

Monomial mono(std::initializer_list<std::pair<Var, int>> powers) {
  Exponents e{};
  for (auto [v, p] : powers) e[static_cast<int>(v)] += p;
  return Monomial(e);
}

// Current parameters a q^ia, b q^ib, c q^ic, x q^ix.
struct Point {
  int ia = 0, ib = 0, ic = 0, ix = 0;

  Poly A() const { return Poly::term(1, mono({{Var::a, 1}, {Var::q, ia}})); }
  Poly B() const { return Poly::term(1, mono({{Var::b, 1}, {Var::q, ib}})); }
  Poly C() const { return Poly::term(1, mono({{Var::c, 1}, {Var::q, ic}})); }
  Poly Cq() const { return Poly::term(1, mono({{Var::c, 1}, {Var::q, ic - 1}})); }  // C/q
  Poly X() const { return Poly::term(1, mono({{Var::x, 1}, {Var::q, ix}})); }
  // Coefficients of phi(Xq^2) = ((X-1) phi(X) + betan phi(Xq)) / D.
  Poly D() const { return Cq() - A() * B() * X(); }
  Poly betan() const { return Poly(1) + Cq() - (A() + B()) * X(); }
};

using Mat = std::array<std::array<Poly, 2>, 2>;

Mat matmul(const Mat& l, const Mat& r) {
  Mat out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out[i][j] = l[i][0] * r[0][j] + l[i][1] * r[1][j];
  return out;
}

Mat adj(const Mat& m) { return {{{m[1][1], -m[0][1]}, {-m[1][0], m[0][0]}}}; }

// Step matrix acting on (phi_p(X), phi_p(Xq)), equal to P * prod(num) / prod(den).
struct Step {
  Mat P;
  std::vector<Poly> num, den;
};

Step x_up(const Point& p) {
  return {{{{Poly(), p.D()}, {p.X() - Poly(1), p.betan()}}}, {}, {p.D()}};
}

// phi with the parameter behind t raised: (phi(X) - t phi(Xq)) / (1 - t), where t is
// A (raise a), B (raise b) or C/q (lower c).
Step raise(const Point& p, const Poly& t) {
  Poly D = p.D();
  return {{{{D, -(t * D)}, {-(t * (p.X() - Poly(1))), D - t * p.betan()}}}, {}, {Poly(1) - t, D}};
}

Step step_for(Point& p, char which, bool up) {
  switch (which) {
    case 'a':
      if (up) {
        Step s = raise(p, p.A());
        ++p.ia;
        return s;
      } else {
        --p.ia;
        Step s = raise(p, p.A());
        return {adj(s.P), {}, {p.Cq() - p.A()}};
      }
    case 'b':
      if (up) {
        Step s = raise(p, p.B());
        ++p.ib;
        return s;
      } else {
        --p.ib;
        Step s = raise(p, p.B());
        return {adj(s.P), {}, {p.Cq() - p.B()}};
      }
    case 'c':
      if (!up) {
        Step s = raise(p, p.Cq());
        --p.ic;
        return s;
      } else {
        ++p.ic;
        Poly t = p.Cq();
        Step s = raise(p, t);
        return {adj(s.P), {Poly(1) - t}, {-p.X(), t - p.A(), t - p.B()}};
      }
    default:
      if (up) {
        Step s = x_up(p);
        ++p.ix;
        return s;
      } else {
        --p.ix;
        Step s = x_up(p);
        return {adj(s.P), {}, {Poly(1) - p.X()}};
      }
  }
}

// P * prod(num) / prod(den) * unit, with factors kept monic and free of monomial content.
struct Accumulator {
  Mat P{{{Poly(1), Poly()}, {Poly(), Poly(1)}}};
  std::vector<Poly> num, den;
  Rational unit_coeff{1};
  Monomial unit_mono;

  // Splits f = u * m * g and files g; u * m goes into the unit.
  void add_factor(const Poly& f, bool numerator) {
    if (f.is_zero()) throw Error(ErrorKind::ZeroDenominator, "zero factor in contiguous step");
    Exponents lo = f.min_exponents();
    for (auto& e : lo) e = -e;
    Rational lead = f.leading().second;
    Poly g = f.times_term(1 / lead, Monomial(lo));
    Monomial m = Monomial(lo).inverse();
    if (numerator) {
      unit_coeff *= lead;
      unit_mono = unit_mono * m;
    } else {
      unit_coeff /= lead;
      unit_mono = unit_mono * m.inverse();
    }
    if (g == Poly(1)) return;
    auto& same = numerator ? num : den;
    auto& other = numerator ? den : num;
    for (auto it = other.begin(); it != other.end(); ++it) {
      if (*it == g) {
        other.erase(it);
        return;
      }
    }
    same.push_back(std::move(g));
  }

  // Divides the matrix by denominator factors that divide every entry.
  void cancel_content() {
    for (std::size_t i = 0; i < den.size();) {
      Mat reduced;
      bool ok = true;
      for (int r = 0; r < 2 && ok; ++r)
        for (int c = 0; c < 2 && ok; ++c) {
          auto d = P[r][c].divide_exact(den[i]);
          if (d) reduced[r][c] = std::move(*d);
          else ok = false;
        }
      if (ok) {
        P = std::move(reduced);
        den.erase(den.begin() + static_cast<long>(i));
      } else {
        ++i;
      }
    }
  }

  void apply(const Step& s) {
    P = matmul(s.P, P);
    for (const auto& f : s.num) add_factor(f, true);
    for (const auto& f : s.den) add_factor(f, false);
    cancel_content();
  }
};

// Builds num / (prod(den) * extra_den) after removing denominator factors that divide num.
RationalFunction finish(Poly num, std::vector<Poly> den) {
  if (num.is_zero()) return RationalFunction();
  Poly d(1);
  for (auto& f : den) {
    if (auto q = num.divide_exact(f)) num = std::move(*q);
    else d = d * f;
  }
  return RationalFunction(std::move(num), std::move(d));
}

// ---------------------------------------------------------------- series matching

// Coefficients of x^i, i < order, in phi(a q^k, b q^l; c q^m; q, x q^n).
std::vector<Rational> series_coefficients(const ShiftVector& s, const Rational& a, const Rational& b,
                                          const Rational& c, const Rational& q, int order) {
  auto qpow = [&](int e) {
    Rational r(1);
    Rational base = e >= 0 ? q : 1 / q;
    for (int i = 0; i < std::abs(e); ++i) r *= base;
    return r;
  };
  Rational A = a * qpow(s.k), B = b * qpow(s.l), C = c * qpow(s.m), Xs = qpow(s.n);
  std::vector<Rational> out(order);
  Rational t(1), qi(1);
  for (int i = 0; i < order; ++i) {
    out[i] = t;
    Rational den = (1 - qi * q) * (1 - C * qi);
    if (den == 0) throw Error(ErrorKind::ZeroDenominator, "series coefficient denominator vanishes");
    t = t * (1 - A * qi) * (1 - B * qi) * Xs / den;
    qi *= q;
  }
  return out;
}

// Basis of the null space of `m` (rows x cols) over the rationals.
std::vector<std::vector<Rational>> null_space(std::vector<std::vector<Rational>> m, int cols) {
  std::vector<int> pivot_col;
  int row = 0;
  int rows = static_cast<int>(m.size());
  for (int col = 0; col < cols && row < rows; ++col) {
    int pr = -1;
    for (int r = row; r < rows; ++r)
      if (m[r][col] != 0) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    std::swap(m[row], m[pr]);
    Rational inv = 1 / m[row][col];
    for (int j = col; j < cols; ++j) m[row][j] *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == row || m[r][col] == 0) continue;
      Rational f = m[r][col];
      for (int j = col; j < cols; ++j) m[r][j] -= f * m[row][j];
    }
    pivot_col.push_back(col);
    ++row;
  }
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(cols);
    v[free] = 1;
    for (std::size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

Poly x_poly(const std::vector<Rational>& coeffs, int offset, int count) {
  std::vector<Poly::Term> terms;
  for (int j = 0; j < count; ++j) {
    Exponents e{};
    e[static_cast<int>(Var::x)] = j;
    terms.emplace_back(Monomial(e), coeffs[offset + j]);
  }
  return Poly::from_terms(std::move(terms));
}

bool is_q_power(const Rational& u, const Rational& q, int range) {
  Rational p(1);
  for (int j = 0; j <= range; ++j) {
    if (u == p || u * p == 1) return true;
    p *= q;
  }
  return false;
}

std::array<std::optional<Rational>, kNumVars> specialization(const Rational& a, const Rational& b,
                                                             const Rational& c, const Rational& q) {
  std::array<std::optional<Rational>, kNumVars> v;
  v[static_cast<int>(Var::a)] = a;
  v[static_cast<int>(Var::b)] = b;
  v[static_cast<int>(Var::c)] = c;
  v[static_cast<int>(Var::q)] = q;
  return v;
}

// Checks f.num * P0 == f.den * Pk after specializing f. Returns nullopt when f has
// a pole at the specialization.
std::optional<bool> agrees(const RationalFunction& f, const std::array<std::optional<Rational>, kNumVars>& spec,
                           const Poly& P0, const Poly& Pk) {
  Poly n = f.num().specialize(spec), d = f.den().specialize(spec);
  if (d.is_zero()) return std::nullopt;
  return n * P0 == d * Pk;
}

}  // namespace

ThreeTermRelation compose_relation(const ShiftVector& s) {
  Accumulator acc;
  Point p;
  const std::array<std::pair<char, int>, 4> moves{{{'a', s.k}, {'b', s.l}, {'c', s.m}, {'x', s.n}}};
  for (auto [which, count] : moves)
    for (int i = 0; i < std::abs(count); ++i) acc.apply(step_for(p, which, count > 0));

  // phi(Xq) = phi(X) - x(1-a)(1-b)/(1-c) phi(aq,bq;cq;x) turns the basis into the relation's.
  const Poly a = Poly::variable(Var::a), b = Poly::variable(Var::b), c = Poly::variable(Var::c);
  const Poly x = Poly::variable(Var::x);
  Poly unit = Poly::term(acc.unit_coeff, acc.unit_mono);
  Poly numprod = unit;
  for (const auto& f : acc.num) numprod = numprod * f;

  std::vector<Poly> qden = acc.den;
  qden.push_back(c - Poly(1));
  Poly qnum = acc.P[0][1] * x * (Poly(1) - a) * (Poly(1) - b) * numprod;  // sign absorbed by c - 1
  Poly rnum = (acc.P[0][0] + acc.P[0][1]) * numprod;
  return {s, finish(std::move(qnum), std::move(qden)), finish(std::move(rnum), acc.den)};
}

MatchedRelation match_series(const ShiftVector& s, const Rational& a, const Rational& b, const Rational& c,
                             const Rational& q, int degree_budget, int order_multiplier) {
  for (int d = 0; d <= degree_budget; ++d) {
    int cols = 3 * (d + 1);
    int order = order_multiplier * (3 * (d + 1) + 8);
    auto S = series_coefficients(s, a, b, c, q, order);
    auto U = series_coefficients({1, 1, 1, 0}, a, b, c, q, order);
    auto Bs = series_coefficients({0, 0, 0, 0}, a, b, c, q, order);
    std::vector<std::vector<Rational>> m(order, std::vector<Rational>(cols));
    for (int i = 0; i < order; ++i)
      for (int j = 0; j <= std::min(i, d); ++j) {
        m[i][j] = S[i - j];
        m[i][d + 1 + j] = -U[i - j];
        m[i][2 * (d + 1) + j] = -Bs[i - j];
      }
    auto basis = null_space(std::move(m), cols);
    if (basis.size() == 1) {
      const auto& v = basis.front();
      return {d, x_poly(v, 0, d + 1), x_poly(v, d + 1, d + 1), x_poly(v, 2 * (d + 1), d + 1)};
    }
  }
  throw Error(ErrorKind::BudgetExceeded,
              "no unique relation of x-degree <= " + std::to_string(degree_budget) + " for shift " + s.to_string());
}

ThreeTermRelation qr_derive(const ShiftVector& s, const DeriveOptions& options) {
  ThreeTermRelation rel = compose_relation(s);
  if (s.is_zero()) return rel;
  std::mt19937_64 rng(options.seed);
  const int horizon = 3 * (options.degree_budget + 1) + 8 + std::abs(s.k) + std::abs(s.l) + std::abs(s.m);

  // Series matching at random specializations of (a, b, c, q).
  int matched = 0;
  for (int attempt = 0; matched < options.specializations; ++attempt) {
    if (attempt > 20 * options.specializations)
      throw Error(ErrorKind::VerificationFailed, "could not find admissible specializations");
    Rational q = random_in(rng, Rational(0), Rational(1)), a = random_rational(rng), b = random_rational(rng),
             c = random_rational(rng);
    if (a == 0 || b == 0 || c == 0) continue;
    if (is_q_power(a, q, 2 * horizon) || is_q_power(b, q, 2 * horizon) || is_q_power(c, q, 2 * horizon)) continue;
    auto spec = specialization(a, b, c, q);
    bool ok = false;
    std::optional<bool> qa, ra;
    for (int multiplier = 1; multiplier <= 2 && !ok; ++multiplier) {
      MatchedRelation mr = match_series(s, a, b, c, q, options.degree_budget, multiplier);
      qa = agrees(rel.Q, spec, mr.P0, mr.P1);
      ra = agrees(rel.R, spec, mr.P0, mr.P2);
      if (!qa || !ra) break;
      ok = *qa && *ra;
    }
    if (!qa || !ra) continue;  // pole of the symbolic pair at this specialization
    if (!ok)
      throw Error(ErrorKind::VerificationFailed, "series matching disagrees with the composed relation for shift " +
                                                     s.to_string());
    ++matched;
  }

  // Numeric residual at random points in (0, 1/2).
  int checked = 0;
  const Rational half(1, 2);
  for (int attempt = 0; checked < options.residual_points; ++attempt) {
    if (attempt > 10 * options.residual_points)
      throw Error(ErrorKind::VerificationFailed, "could not find admissible residual points");
    Rational q = random_in(rng, Rational(0), half), a = random_in(rng, Rational(0), half),
             b = random_in(rng, Rational(0), half), c = random_in(rng, Rational(0), half);
    Rational xmax = half;
    for (int i = 0; i < -s.n; ++i) xmax *= q;
    Rational x = random_in(rng, Rational(0), xmax);
    ExactPoint pt = make_point(a, b, c, q, x);
    try {
      NumericPoint np = to_numeric(pt);
      auto series = [&](const ShiftVector& sh) {
        return qseries::phi21_numeric(qseries::to_numeric(shifted_params(pt, sh)), 1e-32).value;
      };
      ApproxScalar shifted = series(s), up = series({1, 1, 1, 0}), base = series({0, 0, 0, 0});
      ApproxScalar Qv = rel.Q.evaluate(np) * up, Rv = rel.R.evaluate(np) * base;
      double scale = shifted.magnitude_d() + Qv.magnitude_d() + Rv.magnitude_d();
      double residual = (shifted - Qv - Rv).magnitude_d();
      if (residual > options.residual_tol * scale)
        throw Error(ErrorKind::VerificationFailed,
                    "residual " + std::to_string(residual) + " too large for shift " + s.to_string());
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ZeroDenominator) continue;
      throw;
    }
    ++checked;
  }
  return rel;
}

ThreeTermRelation relation_for(const ShiftVector& s) {
  static std::mutex mutex;
  static std::map<ShiftVector, ThreeTermRelation> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(s); it != cache.end()) return it->second;
  }
  ThreeTermRelation rel = in_table(s) ? qr_lookup(s) : qr_derive(s);
  std::lock_guard lock(mutex);
  return cache.emplace(s, std::move(rel)).first->second;
}

}  // namespace qforge::relations
