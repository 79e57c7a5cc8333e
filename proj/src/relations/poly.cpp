#include "qforge/relations/poly.hpp"

#include <algorithm>
#include <cctype>

#include "qforge/error.hpp"

namespace qforge::relations {

std::optional<Var> var_from_name(std::string_view name) {
  for (int v = 0; v < kNumVars; ++v)
    if (name == kVarNames[v]) return static_cast<Var>(v);
  return std::nullopt;
}

Monomial::Monomial(const Exponents& e) : key_(0) {
  for (int v = 0; v < kNumVars; ++v) {
    if (e[v] < -kBias || e[v] >= kBias) throw Error(ErrorKind::InvalidDomain, "monomial exponent out of range");
    key_ |= static_cast<std::uint64_t>(e[v] + kBias) << shift(static_cast<Var>(v));
  }
}

Exponents Monomial::exponents() const {
  Exponents e{};
  for (int v = 0; v < kNumVars; ++v) e[v] = exponent(static_cast<Var>(v));
  return e;
}

Monomial Monomial::inverse() const {
  Exponents e = exponents();
  for (auto& x : e) x = -x;
  return Monomial(e);
}

// ---------------------------------------------------------------- construction

namespace {

bool term_greater(const Poly::Term& l, const Poly::Term& r) { return l.first > r.first; }

std::vector<Poly::Term> merge_terms(const std::vector<Poly::Term>& a, const std::vector<Poly::Term>& b,
                                    bool subtract) {
  std::vector<Poly::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first > b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first > a[i].first) {
      out.push_back(b[j]);
      if (subtract) out.back().second = -out.back().second;
      ++j;
    } else {
      Rational c = subtract ? Rational(a[i].second - b[j].second) : Rational(a[i].second + b[j].second);
      if (c != 0) out.emplace_back(a[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Poly::Poly(long constant) {
  if (constant != 0) terms_.emplace_back(Monomial(), Rational(constant));
}

Poly::Poly(const Rational& constant) {
  if (constant != 0) terms_.emplace_back(Monomial(), constant);
}

Poly Poly::variable(Var v) {
  Exponents e{};
  e[static_cast<int>(v)] = 1;
  return term(Rational(1), Monomial(e));
}

Poly Poly::term(const Rational& coeff, const Monomial& m) {
  Poly p;
  if (coeff != 0) p.terms_.emplace_back(m, coeff);
  return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), term_greater);
  Poly p;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().first == t.first)
      p.terms_.back().second += t.second;
    else
      p.terms_.push_back(std::move(t));
    if (p.terms_.back().second == 0) p.terms_.pop_back();
  }
  return p;
}

bool Poly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one()); }

Exponents Poly::min_exponents() const {
  Exponents lo{};
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Exponents e = m.exponents();
    for (int v = 0; v < kNumVars; ++v) lo[v] = first ? e[v] : std::min(lo[v], e[v]);
    first = false;
  }
  return lo;
}

Exponents Poly::max_exponents() const {
  Exponents hi{};
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Exponents e = m.exponents();
    for (int v = 0; v < kNumVars; ++v) hi[v] = first ? e[v] : std::max(hi[v], e[v]);
    first = false;
  }
  return hi;
}

bool Poly::depends_on(Var v) const {
  for (const auto& [m, c] : terms_)
    if (m.exponent(v) != 0) return true;
  return false;
}

// ---------------------------------------------------------------- arithmetic

Poly Poly::operator-() const {
  Poly p = *this;
  for (auto& t : p.terms_) t.second = -t.second;
  return p;
}

Poly& Poly::operator+=(const Poly& rhs) {
  terms_ = merge_terms(terms_, rhs.terms_, false);
  return *this;
}

Poly& Poly::operator-=(const Poly& rhs) {
  terms_ = merge_terms(terms_, rhs.terms_, true);
  return *this;
}

Poly& Poly::operator*=(const Poly& rhs) { return *this = *this * rhs; }

Poly Poly::times_term(const Rational& coeff, const Monomial& m) const {
  if (coeff == 0) return Poly();
  Poly p;
  p.terms_.reserve(terms_.size());
  for (const auto& [tm, tc] : terms_) p.terms_.emplace_back(tm * m, tc * coeff);
  return p;
}

namespace {

void check_product_range(const Poly& a, const Poly& b) {
  Exponents la = a.min_exponents(), ha = a.max_exponents();
  Exponents lb = b.min_exponents(), hb = b.max_exponents();
  for (int v = 0; v < kNumVars; ++v) {
    if (ha[v] + hb[v] >= Monomial::kBias || la[v] + lb[v] < -Monomial::kBias)
      throw Error(ErrorKind::InvalidDomain, "polynomial exponent overflow in product");
  }
}

}  // namespace

Poly operator*(const Poly& lhs, const Poly& rhs) {
  if (lhs.is_zero() || rhs.is_zero()) return Poly();
  const Poly& small = lhs.size() <= rhs.size() ? lhs : rhs;
  const Poly& big = lhs.size() <= rhs.size() ? rhs : lhs;
  check_product_range(small, big);
  // Multiplying by one term preserves order, so the product is a merge of sorted runs.
  std::vector<std::vector<Poly::Term>> runs;
  runs.reserve(small.size());
  for (const auto& [m, c] : small.terms()) runs.push_back(big.times_term(c, m).terms());
  while (runs.size() > 1) {
    std::vector<std::vector<Poly::Term>> next;
    next.reserve((runs.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < runs.size(); i += 2) next.push_back(merge_terms(runs[i], runs[i + 1], false));
    if (runs.size() % 2) next.push_back(std::move(runs.back()));
    runs = std::move(next);
  }
  Poly out;
  out.terms_ = std::move(runs.front());
  return out;
}

Poly Poly::pow(unsigned exponent) const {
  Poly out(1);
  Poly base = *this;
  while (exponent) {
    if (exponent & 1) out *= base;
    exponent >>= 1;
    if (exponent) base *= base;
  }
  return out;
}

std::optional<Poly> Poly::divide_exact(const Poly& divisor) const {
  if (divisor.is_zero()) throw Error(ErrorKind::DivisionByZero, "polynomial division by zero");
  if (is_zero()) return Poly();
  if (divisor.is_term()) {
    const auto& [m, c] = divisor.leading();
    return times_term(1 / c, m.inverse());
  }
  // Move both into the ordinary polynomial ring, where leading-term divisibility is decisive.
  Exponents dl = divisor.min_exponents(), nl = min_exponents();
  for (auto& e : dl) e = -e;
  for (auto& e : nl) e = -e;
  Monomial dshift(dl), nshift(nl);
  Poly d = divisor.times_term(1, dshift);
  Poly r = times_term(1, nshift);
  const auto& [dm, dc] = d.leading();
  Exponents de = dm.exponents();
  std::vector<Term> quotient;
  while (!r.is_zero()) {
    const auto& [rm, rc] = r.leading();
    Exponents re = rm.exponents();
    Exponents qe{};
    for (int v = 0; v < kNumVars; ++v) {
      qe[v] = re[v] - de[v];
      if (qe[v] < 0) return std::nullopt;
    }
    Monomial qm(qe);
    Rational qc = rc / dc;
    r -= d.times_term(qc, qm);
    quotient.emplace_back(qm, qc);
  }
  // this * nshift = quotient * divisor * dshift
  return from_terms(std::move(quotient)).times_term(1, dshift * nshift.inverse());
}

Poly Poly::substitute_term(Var v, const Rational& coeff, const Monomial& m) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  Exponents me = m.exponents();
  for (const auto& [tm, tc] : terms_) {
    Exponents e = tm.exponents();
    int k = e[static_cast<int>(v)];
    e[static_cast<int>(v)] = 0;
    for (int i = 0; i < kNumVars; ++i) e[i] += k * me[i];
    Rational c = tc;
    if (k > 0) {
      for (int i = 0; i < k; ++i) c *= coeff;
    } else if (k < 0) {
      if (coeff == 0) throw Error(ErrorKind::ZeroDenominator, "negative power of zero in substitution");
      for (int i = 0; i < -k; ++i) c /= coeff;
    }
    out.emplace_back(Monomial(e), std::move(c));
  }
  return from_terms(std::move(out));
}

Poly Poly::specialize(const std::array<std::optional<Rational>, kNumVars>& values) const {
  std::array<std::vector<Rational>, kNumVars> pos, neg;
  std::vector<Term> out;
  out.reserve(terms_.size());
  auto power = [&](int v, int e) -> const Rational& {
    auto& table = e >= 0 ? pos[v] : neg[v];
    int k = e >= 0 ? e : -e;
    if (table.empty()) table.emplace_back(1);
    while (static_cast<int>(table.size()) <= k) {
      if (e < 0 && *values[v] == 0) throw Error(ErrorKind::ZeroDenominator, "negative power of zero");
      table.push_back(table.back() * (e >= 0 ? *values[v] : 1 / *values[v]));
    }
    return table[k];
  };
  for (const auto& [m, c] : terms_) {
    Exponents e = m.exponents();
    Rational coeff = c;
    for (int v = 0; v < kNumVars; ++v) {
      if (!values[v] || e[v] == 0) continue;
      coeff *= power(v, e[v]);
      e[v] = 0;
    }
    if (coeff != 0) out.emplace_back(Monomial(e), std::move(coeff));
  }
  return from_terms(std::move(out));
}

// ---------------------------------------------------------------- text

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [m, c] : terms_) {
    if (!s.empty()) s += " + ";
    std::string factors;
    for (int v = 0; v < kNumVars; ++v) {
      int e = m.exponent(static_cast<Var>(v));
      if (e == 0) continue;
      if (!factors.empty()) factors += "*";
      factors += kVarNames[v];
      if (e < 0)
        factors += "^(" + std::to_string(e) + ")";
      else if (e != 1)
        factors += "^" + std::to_string(e);
    }
    if (factors.empty()) {
      s += c == 1 ? std::string("1") : "(" + format_rational(c) + ")";
    } else if (c == 1) {
      s += factors;
    } else {
      s += "(" + format_rational(c) + ")*" + factors;
    }
  }
  return s;
}

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Split at `sep` outside parentheses.
std::vector<std::string_view> split_top(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (depth == 0 && s[i] == sep) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(s.substr(start));
  return parts;
}

}  // namespace

Poly Poly::parse(std::string_view text) {
  text = strip(text);
  if (text.empty()) throw Error(ErrorKind::ParseError, "empty polynomial");
  if (text == "0") return Poly();
  std::vector<Term> terms;
  for (auto raw : split_top(text, '+')) {
    auto term_text = strip(raw);
    if (term_text.empty()) throw Error(ErrorKind::ParseError, "empty term in '" + std::string(text) + "'");
    Rational coeff(1);
    Exponents e{};
    for (auto raw_factor : split_top(term_text, '*')) {
      auto f = strip(raw_factor);
      if (f.empty()) throw Error(ErrorKind::ParseError, "empty factor in '" + std::string(term_text) + "'");
      if (f.front() == '(') {
        if (f.back() != ')') throw Error(ErrorKind::ParseError, "unbalanced coefficient '" + std::string(f) + "'");
        coeff *= parse_rational(f.substr(1, f.size() - 2));
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(f.front()))) {
        coeff *= parse_rational(f);
        continue;
      }
      auto caret = f.find('^');
      auto var = var_from_name(strip(f.substr(0, caret)));
      if (!var) throw Error(ErrorKind::ParseError, "unknown symbol '" + std::string(f) + "'");
      int power = 1;
      if (caret != std::string_view::npos) {
        auto ptext = strip(f.substr(caret + 1));
        if (!ptext.empty() && ptext.front() == '(' && ptext.back() == ')') ptext = ptext.substr(1, ptext.size() - 2);
        Rational p = parse_rational(ptext);
        if (p.get_den() != 1) throw Error(ErrorKind::ParseError, "non-integer exponent");
        power = static_cast<int>(p.get_num().get_si());
      }
      e[static_cast<int>(*var)] += power;
    }
    terms.emplace_back(Monomial(e), coeff);
  }
  return from_terms(std::move(terms));
}

}  // namespace qforge::relations
