#include "qforge/relations/relation.hpp"

#include <algorithm>
#include <charconv>

#include "qforge/error.hpp"

namespace qforge::relations {

std::string ShiftVector::to_string() const {
  return std::to_string(k) + "," + std::to_string(l) + "," + std::to_string(m) + "," + std::to_string(n);
}

ShiftVector ShiftVector::parse(std::string_view text) {
  std::array<int, 4> v{};
  std::size_t pos = 0;
  for (int i = 0; i < 4; ++i) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos < text.size() && text[pos] == '+') ++pos;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), v[i]);
    if (ec != std::errc()) throw Error(ErrorKind::ParseError, "bad shift vector '" + std::string(text) + "'");
    pos = static_cast<std::size_t>(ptr - text.data());
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (i < 3) {
      if (pos >= text.size() || text[pos] != ',')
        throw Error(ErrorKind::ParseError, "shift vector needs four comma-separated integers");
      ++pos;
    }
  }
  if (pos != text.size()) throw Error(ErrorKind::ParseError, "trailing text in shift vector '" + std::string(text) + "'");
  return {v[0], v[1], v[2], v[3]};
}

namespace {

nlohmann::json rf_json(const RationalFunction& f) {
  return {{"num", f.num().to_string()}, {"den", f.den().to_string()}};
}

RationalFunction rf_from_json(const nlohmann::json& j) {
  return RationalFunction(Poly::parse(j.at("num").get<std::string>()), Poly::parse(j.at("den").get<std::string>()));
}

}  // namespace

nlohmann::json ThreeTermRelation::to_json() const {
  return {{"shift", shift.as_array()}, {"Q", rf_json(Q)}, {"R", rf_json(R)}};
}

ThreeTermRelation ThreeTermRelation::from_json(const nlohmann::json& j) {
  try {
    auto s = j.at("shift").get<std::array<int, 4>>();
    return {{s[0], s[1], s[2], s[3]}, rf_from_json(j.at("Q")), rf_from_json(j.at("R"))};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("relation JSON: ") + e.what());
  }
}

ExactPoint make_point(const ExactScalar& a, const ExactScalar& b, const ExactScalar& c, const ExactScalar& q,
                      const ExactScalar& x) {
  return {a, b, c, q, x, ExactScalar(1)};
}

NumericPoint to_numeric(const ExactPoint& p, mpfr_prec_t precision) {
  NumericPoint out;
  for (int v = 0; v < kNumVars; ++v) out[v] = ApproxScalar::from_exact(p[v], precision);
  return out;
}

// ---------------------------------------------------------------- families

ParamFamily::ParamFamily(RationalFunction a, RationalFunction b, RationalFunction c, RationalFunction x,
                         int root_order)
    : slots_{std::move(a), std::move(b), std::move(c), std::move(x)}, root_order_(root_order) {
  if (root_order_ < 1) throw Error(ErrorKind::InvalidDomain, "root order must be positive");
  const RationalFunction one(1);
  bool a0 = slots_[0].is_zero(), b0 = slots_[1].is_zero(), c0 = slots_[2].is_zero(), x0 = slots_[3].is_zero();
  if (slots_[0] == one) throw Error(ErrorKind::DegenerateFamily, "excluded family: a = 1");
  if (slots_[1] == one) throw Error(ErrorKind::DegenerateFamily, "excluded family: b = 1");
  if (a0 && c0) throw Error(ErrorKind::DegenerateFamily, "excluded family: a = c = 0");
  if (b0 && c0) throw Error(ErrorKind::DegenerateFamily, "excluded family: b = c = 0");
  if (x0) throw Error(ErrorKind::DegenerateFamily, "excluded family: x = 0");
}

std::vector<Var> ParamFamily::free_symbols() const {
  std::vector<Var> out;
  for (int v = 0; v < kNumVars; ++v) {
    Var var = static_cast<Var>(v);
    if (var == Var::q || var == Var::w) continue;
    if (std::any_of(slots_.begin(), slots_.end(), [&](const RationalFunction& f) { return f.depends_on(var); }))
      out.push_back(var);
  }
  return out;
}

ExactPoint ParamFamily::evaluate(const ExactPoint& values) const {
  ExactPoint p = values;
  p[static_cast<int>(Var::w)] = ExactScalar::root_of_unity(root_order_, 1);
  ExactPoint out = p;
  static constexpr std::array<Var, 4> kSlots{Var::a, Var::b, Var::c, Var::x};
  for (int i = 0; i < 4; ++i) out[static_cast<int>(kSlots[i])] = slots_[i].evaluate(p);
  out[static_cast<int>(Var::w)] = ExactScalar(1);
  return out;
}

RationalFunction::Substitution ParamFamily::substitution() const {
  RationalFunction::Substitution s;
  s[static_cast<int>(Var::a)] = slots_[0];
  s[static_cast<int>(Var::b)] = slots_[1];
  s[static_cast<int>(Var::c)] = slots_[2];
  s[static_cast<int>(Var::x)] = slots_[3];
  return s;
}

std::string ParamFamily::to_string() const {
  std::string s = "(";
  for (int i = 0; i < 4; ++i) {
    if (i) s += ", ";
    s += slots_[i].to_string();
  }
  s += ")";
  if (root_order_ > 1) s += " with w = zeta_" + std::to_string(root_order_);
  return s;
}

ParamFamily shift_params(const ParamFamily& fam, const ShiftVector& s, int step) {
  if (step < 1) throw Error(ErrorKind::InvalidDomain, "shift_params step must be positive");
  auto qpow = [](int e) {
    Exponents ex{};
    ex[static_cast<int>(Var::q)] = e;
    return RationalFunction(Poly::term(1, Monomial(ex)));
  };
  int t = step - 1;
  return ParamFamily(fam.a() * qpow(s.k * t), fam.b() * qpow(s.l * t), fam.c() * qpow(s.m * t),
                     fam.x() * qpow(s.n * t), fam.root_order());
}

// ---------------------------------------------------------------- table

namespace {

RationalFunction V(Var v) { return RationalFunction::variable(v); }

// (z; q)_n as a rational function.
RationalFunction qp(const RationalFunction& z, int n) {
  RationalFunction r(1), qi(1);
  for (int j = 0; j < n; ++j) {
    r *= RationalFunction(1) - z * qi;
    qi *= V(Var::q);
  }
  return r;
}

ThreeTermRelation build_table_entry(const ShiftVector& s) {
  const RationalFunction a = V(Var::a), b = V(Var::b), c = V(Var::c), q = V(Var::q), x = V(Var::x);
  const RationalFunction one(1);
  if (s == ShiftVector{0, 0, 0, 2}) {
    RationalFunction Q = -((one - a) * (one - b) * x * (c + q - (a + b) * x * q)) / ((one - c) * (c - a * b * x * q));
    RationalFunction R = (c + (one - a - b) * x * q) / (c - a * b * x * q);
    return {s, Q, R};
  }
  if (s == ShiftVector{0, 1, 1, 0}) {
    return {s, -((one - a) * (c - a * b * x)) / (a - c), a * (one - c) / (a - c)};
  }
  if (s == ShiftVector{0, 2, 2, 0}) {
    RationalFunction den = (one - b * q) * (a - c) * (a - c * q) * x;
    RationalFunction Q = -((one - a) * (one - c * q) * (c - a * b * x) * ((one - c) * q + (a - b * q) * x)) / den;
    RationalFunction R = (one - c) * (one - c * q) * ((one - a) * c * q + a * (a - b * q) * x) / den;
    return {s, Q, R};
  }
  if (s == ShiftVector{1, 2, 1, -1}) {
    RationalFunction den = (one - b * q) * (q - x);
    return {s, (c - b * q + b * (one - a) * x) * q / den, (one - c) * q / den};
  }
  if (s == ShiftVector{0, 3, 3, 0}) {
    RationalFunction den = a.pow(3) * qp(b * q, 2) * qp(c / a, 3) * x * x;
    RationalFunction q2 = q * q;
    RationalFunction Qbrace = (one - c) * (one - c * q) * q2 + (one - c) * (a - b * q2) * x * q -
                              (one - a) * (b - c) * x * q2 + (a - b * q) * (a - b * q2) * x * x;
    RationalFunction Rbrace = (one - a) * (one - c * q) * c * q2 + c * (one - a) * (a - b * q2) * x * q -
                              a * (one - a) * (b - c) * x * q2 + a * (a - b * q) * (a - b * q2) * x * x;
    RationalFunction Q = -((one - a) * (c - a * b * x) * qp(c * q, 2)) / den * Qbrace;
    RationalFunction R = qp(c, 3) / den * Rbrace;
    return {s, Q, R};
  }
  throw Error(ErrorKind::NotInTable, "no tabulated relation for shift " + s.to_string());
}

}  // namespace

const std::vector<ShiftVector>& table_shifts() {
  static const std::vector<ShiftVector> shifts{{0, 0, 0, 2}, {0, 1, 1, 0}, {0, 2, 2, 0}, {1, 2, 1, -1}, {0, 3, 3, 0}};
  return shifts;
}

bool in_table(const ShiftVector& s) {
  const auto& t = table_shifts();
  return std::find(t.begin(), t.end(), s) != t.end();
}

ThreeTermRelation qr_lookup(const ShiftVector& s) {
  if (!in_table(s)) throw Error(ErrorKind::NotInTable, "no tabulated relation for shift " + s.to_string());
  return build_table_entry(s);
}

// ---------------------------------------------------------------- evaluation

ExactScalar eval_rational_function(const RationalFunction& f, const ExactPoint& point) { return f.evaluate(point); }

qseries::ExactParams shifted_params(const ExactPoint& p, const ShiftVector& s) {
  const ExactScalar& q = p[static_cast<int>(Var::q)];
  return {p[0] * q.pow(s.k), p[1] * q.pow(s.l), p[2] * q.pow(s.m), q, p[4] * q.pow(s.n)};
}

double relation_residual(const ThreeTermRelation& rel, const ExactPoint& point, double tol) {
  double inner = tol / 10;
  auto series = [&](const ShiftVector& s) {
    return qseries::phi21_numeric(qseries::to_numeric(shifted_params(point, s)), inner).value;
  };
  ApproxScalar shifted = series(rel.shift);
  ApproxScalar up = series({1, 1, 1, 0});
  ApproxScalar base = series({0, 0, 0, 0});
  NumericPoint np = to_numeric(point);
  ApproxScalar Q = rel.Q.evaluate(np), R = rel.R.evaluate(np);
  return (shifted - Q * up - R * base).magnitude_d();
}

}  // namespace qforge::relations
