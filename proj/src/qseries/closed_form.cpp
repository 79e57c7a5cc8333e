#include "qforge/qseries/closed_form.hpp"

#include "qforge/error.hpp"
#include "qforge/qseries/qpoch.hpp"

namespace qforge::qseries {

using nlohmann::json;

// ---------------------------------------------------------------- IntExpr

IntExpr::IntExpr(long constant) {
  if (constant != 0) terms_[{}] = constant;
}

IntExpr IntExpr::symbol(const std::string& name) {
  IntExpr e;
  e.terms_[{{name, 1}}] = 1;
  return e;
}

namespace {

void add_into(std::map<IntExpr::Powers, long>& dst, const IntExpr::Powers& key, long coeff) {
  long& slot = dst[key];
  slot += coeff;
  if (slot == 0) dst.erase(key);
}

}  // namespace

IntExpr IntExpr::operator+(const IntExpr& rhs) const {
  if (divisor_ != rhs.divisor_) {
    IntExpr l = *this, r = rhs;
    for (auto& [k, v] : l.terms_) v *= rhs.divisor_;
    for (auto& [k, v] : r.terms_) v *= divisor_;
    l.divisor_ = r.divisor_ = divisor_ * rhs.divisor_;
    return l + r;
  }
  IntExpr out = *this;
  for (const auto& [k, v] : rhs.terms_) add_into(out.terms_, k, v);
  return out;
}

IntExpr IntExpr::operator-(const IntExpr& rhs) const { return *this + rhs * IntExpr(-1); }

IntExpr IntExpr::operator*(const IntExpr& rhs) const {
  IntExpr out;
  out.divisor_ = divisor_ * rhs.divisor_;
  for (const auto& [ka, va] : terms_) {
    for (const auto& [kb, vb] : rhs.terms_) {
      Powers k = ka;
      for (const auto& [s, e] : kb) k[s] += e;
      add_into(out.terms_, k, va * vb);
    }
  }
  return out;
}

IntExpr IntExpr::divided_by(long divisor) const {
  if (divisor <= 0) throw Error(ErrorKind::InvalidDomain, "IntExpr divisor must be positive");
  IntExpr out = *this;
  out.divisor_ *= divisor;
  return out;
}

long IntExpr::evaluate(const Bindings& bindings) const {
  Integer total = 0;
  for (const auto& [powers, coeff] : terms_) {
    Integer term = coeff;
    for (const auto& [name, e] : powers) {
      auto it = bindings.find(name);
      if (it == bindings.end()) throw Error(ErrorKind::ConstraintViolated, "unbound integer symbol " + name);
      Rational v = it->second.to_rational();
      if (v.get_den() != 1) throw Error(ErrorKind::ConstraintViolated, "symbol " + name + " is not an integer");
      for (int i = 0; i < e; ++i) term *= v.get_num();
    }
    total += term;
  }
  if (total % divisor_ != 0) throw Error(ErrorKind::ConstraintViolated, "integer expression is not integral");
  total /= divisor_;
  if (!total.fits_slong_p()) throw Error(ErrorKind::InvalidDomain, "integer expression overflows");
  return total.get_si();
}

json IntExpr::to_json() const {
  if (divisor_ == 1 && terms_.empty()) return 0;
  if (divisor_ == 1 && terms_.size() == 1) {
    const auto& [k, v] = *terms_.begin();
    if (k.empty()) return v;
    if (v == 1 && k.size() == 1 && k.begin()->second == 1) return k.begin()->first;
  }
  json terms = json::array();
  for (const auto& [k, v] : terms_) {
    json powers = json::object();
    for (const auto& [s, e] : k) powers[s] = e;
    terms.push_back(json::array({v, powers}));
  }
  return json{{"terms", terms}, {"div", divisor_}};
}

IntExpr IntExpr::from_json(const json& j) {
  if (j.is_number_integer()) return IntExpr(j.get<long>());
  if (j.is_string()) return symbol(j.get<std::string>());
  if (!j.is_object() || !j.contains("terms")) throw Error(ErrorKind::ParseError, "malformed integer expression");
  IntExpr out;
  for (const auto& t : j.at("terms")) {
    if (!t.is_array() || t.size() != 2) throw Error(ErrorKind::ParseError, "malformed integer expression term");
    Powers k;
    for (const auto& [s, e] : t[1].items())
      if (e.get<int>() != 0) k[s] = e.get<int>();
    add_into(out.terms_, k, t[0].get<long>());
  }
  out.divisor_ = j.value("div", 1L);
  if (out.divisor_ <= 0) throw Error(ErrorKind::ParseError, "integer expression divisor must be positive");
  return out;
}

// ---------------------------------------------------------------- ClosedFormExpr

ClosedFormExpr::ClosedFormExpr() : ClosedFormExpr(Lit{ExactScalar(0)}) {}

ClosedFormExpr::ClosedFormExpr(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

ClosedFormExpr ClosedFormExpr::lit(const ExactScalar& v) { return ClosedFormExpr(Lit{v}); }
ClosedFormExpr ClosedFormExpr::sym(const std::string& name) { return ClosedFormExpr(Sym{name}); }
ClosedFormExpr ClosedFormExpr::qpow(IntExpr e) { return ClosedFormExpr(QPow{std::move(e)}); }

ClosedFormExpr ClosedFormExpr::qpoch(const ClosedFormExpr& base, int step, std::optional<IntExpr> length) {
  if (step < 1) throw Error(ErrorKind::InvalidDomain, "q-Pochhammer step must be positive");
  return ClosedFormExpr(QPoch{std::make_shared<const ClosedFormExpr>(base), step, std::move(length)});
}

ClosedFormExpr ClosedFormExpr::mul(std::vector<ClosedFormExpr> factors) {
  return ClosedFormExpr(Mul{std::move(factors)});
}

ClosedFormExpr ClosedFormExpr::div(const ClosedFormExpr& num, const ClosedFormExpr& den) {
  return ClosedFormExpr(
      Div{std::make_shared<const ClosedFormExpr>(num), std::make_shared<const ClosedFormExpr>(den)});
}

ClosedFormExpr ClosedFormExpr::add(std::vector<ClosedFormExpr> terms) { return ClosedFormExpr(Add{std::move(terms)}); }

ClosedFormExpr ClosedFormExpr::sub(const ClosedFormExpr& lhs, const ClosedFormExpr& rhs) {
  return ClosedFormExpr(
      Sub{std::make_shared<const ClosedFormExpr>(lhs), std::make_shared<const ClosedFormExpr>(rhs)});
}

ClosedFormExpr ClosedFormExpr::pow(const ClosedFormExpr& base, IntExpr exponent) {
  return ClosedFormExpr(Pow{std::make_shared<const ClosedFormExpr>(base), std::move(exponent)});
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

bool ClosedFormExpr::has_infinite_factor() const {
  return std::visit(Overloaded{
                        [](const Lit&) { return false; },
                        [](const Sym&) { return false; },
                        [](const QPow&) { return false; },
                        [](const QPoch& n) { return !n.length || n.base->has_infinite_factor(); },
                        [](const Mul& n) {
                          for (const auto& f : n.factors)
                            if (f.has_infinite_factor()) return true;
                          return false;
                        },
                        [](const Div& n) { return n.num->has_infinite_factor() || n.den->has_infinite_factor(); },
                        [](const Add& n) {
                          for (const auto& f : n.terms)
                            if (f.has_infinite_factor()) return true;
                          return false;
                        },
                        [](const Sub& n) { return n.lhs->has_infinite_factor() || n.rhs->has_infinite_factor(); },
                        [](const Pow& n) { return n.base->has_infinite_factor(); },
                    },
                    *node_);
}

json ClosedFormExpr::to_json() const {
  return std::visit(
      Overloaded{
          [](const Lit& n) { return json{{"lit", n.value.to_string()}}; },
          [](const Sym& n) { return json{{"sym", n.name}}; },
          [](const QPow& n) { return json{{"qpow", n.exponent.to_json()}}; },
          [](const QPoch& n) {
            return json{{"qpoch",
                         {{"base", n.base->to_json()},
                          {"step", n.step},
                          {"len", n.length ? n.length->to_json() : json("inf")}}}};
          },
          [](const Mul& n) {
            json arr = json::array();
            for (const auto& f : n.factors) arr.push_back(f.to_json());
            return json{{"mul", arr}};
          },
          [](const Div& n) { return json{{"div", json::array({n.num->to_json(), n.den->to_json()})}}; },
          [](const Add& n) {
            json arr = json::array();
            for (const auto& f : n.terms) arr.push_back(f.to_json());
            return json{{"add", arr}};
          },
          [](const Sub& n) { return json{{"sub", json::array({n.lhs->to_json(), n.rhs->to_json()})}}; },
          [](const Pow& n) { return json{{"pow", {{"base", n.base->to_json()}, {"exp", n.exponent.to_json()}}}}; },
      },
      *node_);
}

ClosedFormExpr ClosedFormExpr::from_json(const json& j) {
  if (!j.is_object() || j.size() != 1) throw Error(ErrorKind::ParseError, "expression node must have one key");
  const auto& [kind, body] = *j.items().begin();
  auto list = [&](const json& arr) {
    std::vector<ClosedFormExpr> out;
    for (const auto& e : arr) out.push_back(from_json(e));
    return out;
  };
  auto pair = [&](const json& arr) {
    if (!arr.is_array() || arr.size() != 2) throw Error(ErrorKind::ParseError, kind + " expects two operands");
    return std::pair{from_json(arr[0]), from_json(arr[1])};
  };
  if (kind == "lit") return lit(ExactScalar::parse(body.get<std::string>()));
  if (kind == "sym") return sym(body.get<std::string>());
  if (kind == "qpow") return qpow(IntExpr::from_json(body));
  if (kind == "qpoch") {
    std::optional<IntExpr> len;
    const json& l = body.at("len");
    if (!(l.is_string() && l.get<std::string>() == "inf")) len = IntExpr::from_json(l);
    return qpoch(from_json(body.at("base")), body.value("step", 1), len);
  }
  if (kind == "mul") return mul(list(body));
  if (kind == "add") return add(list(body));
  if (kind == "div") {
    auto [n, d] = pair(body);
    return div(n, d);
  }
  if (kind == "sub") {
    auto [l, r] = pair(body);
    return sub(l, r);
  }
  if (kind == "pow") return pow(from_json(body.at("base")), IntExpr::from_json(body.at("exp")));
  throw Error(ErrorKind::ParseError, "unknown expression node kind '" + kind + "'");
}

// ---------------------------------------------------------------- evaluation

namespace {

const ExactScalar& lookup(const Bindings& b, const std::string& name) {
  auto it = b.find(name);
  if (it == b.end()) throw Error(ErrorKind::ConstraintViolated, "unbound symbol " + name);
  return it->second;
}

struct ExactEval {
  const Bindings& bindings;
  ExactScalar q;

  ExactScalar operator()(const ClosedFormExpr& e) const {
    return std::visit(
        Overloaded{
            [](const ClosedFormExpr::Lit& n) { return n.value; },
            [&](const ClosedFormExpr::Sym& n) { return lookup(bindings, n.name); },
            [&](const ClosedFormExpr::QPow& n) {
              long k = n.exponent.evaluate(bindings);
              if (k < 0 && q.is_zero()) throw Error(ErrorKind::ZeroDenominator, "negative power of q = 0");
              return q.pow(k);
            },
            [&](const ClosedFormExpr::QPoch& n) {
              if (!n.length) throw Error(ErrorKind::InvalidDomain, "infinite q-Pochhammer in exact mode");
              long len = n.length->evaluate(bindings);
              if (len < 0) throw Error(ErrorKind::InvalidDomain, "negative q-Pochhammer length");
              return qpoch_finite((*this)(*n.base), q.pow(n.step), len);
            },
            [&](const ClosedFormExpr::Mul& n) {
              ExactScalar out(1);
              for (const auto& f : n.factors) out *= (*this)(f);
              return out;
            },
            [&](const ClosedFormExpr::Div& n) {
              ExactScalar den = (*this)(*n.den);
              if (den.is_zero()) throw Error(ErrorKind::ZeroDenominator, "closed form denominator vanishes");
              return (*this)(*n.num) / den;
            },
            [&](const ClosedFormExpr::Add& n) {
              ExactScalar out(0);
              for (const auto& f : n.terms) out += (*this)(f);
              return out;
            },
            [&](const ClosedFormExpr::Sub& n) { return (*this)(*n.lhs) - (*this)(*n.rhs); },
            [&](const ClosedFormExpr::Pow& n) {
              long k = n.exponent.evaluate(bindings);
              ExactScalar base = (*this)(*n.base);
              if (k < 0 && base.is_zero()) throw Error(ErrorKind::ZeroDenominator, "negative power of zero");
              return base.pow(k);
            },
        },
        e.node());
  }
};

struct NumericEval {
  const Bindings& bindings;
  ApproxScalar q;
  double tol;
  mpfr_prec_t precision;

  ApproxScalar operator()(const ClosedFormExpr& e) const {
    return std::visit(
        Overloaded{
            [&](const ClosedFormExpr::Lit& n) { return ApproxScalar::from_exact(n.value, precision); },
            [&](const ClosedFormExpr::Sym& n) { return ApproxScalar::from_exact(lookup(bindings, n.name), precision); },
            [&](const ClosedFormExpr::QPow& n) {
              long k = n.exponent.evaluate(bindings);
              if (k < 0 && q.is_exact_zero()) throw Error(ErrorKind::ZeroDenominator, "negative power of q = 0");
              return q.pow(k);
            },
            [&](const ClosedFormExpr::QPoch& n) {
              ApproxScalar base = (*this)(*n.base);
              ApproxScalar step = q.pow(n.step);
              if (!n.length) return qpoch_infinite(base, step, tol).value;
              long len = n.length->evaluate(bindings);
              if (len < 0) throw Error(ErrorKind::InvalidDomain, "negative q-Pochhammer length");
              return qpoch_finite(base, step, len);
            },
            [&](const ClosedFormExpr::Mul& n) {
              ApproxScalar out(1);
              for (const auto& f : n.factors) out *= (*this)(f);
              return out;
            },
            [&](const ClosedFormExpr::Div& n) {
              ApproxScalar den = (*this)(*n.den);
              if (den.is_exact_zero()) throw Error(ErrorKind::ZeroDenominator, "closed form denominator vanishes");
              return (*this)(*n.num) / den;
            },
            [&](const ClosedFormExpr::Add& n) {
              ApproxScalar out(0);
              for (const auto& f : n.terms) out += (*this)(f);
              return out;
            },
            [&](const ClosedFormExpr::Sub& n) { return (*this)(*n.lhs) - (*this)(*n.rhs); },
            [&](const ClosedFormExpr::Pow& n) { return (*this)(*n.base).pow(n.exponent.evaluate(bindings)); },
        },
        e.node());
  }
};

}  // namespace

ExactScalar closed_form_eval_exact(const ClosedFormExpr& e, const Bindings& bindings) {
  return ExactEval{bindings, lookup(bindings, "q")}(e);
}

ApproxScalar closed_form_eval_numeric(const ClosedFormExpr& e, const Bindings& bindings, double tol,
                                      mpfr_prec_t precision) {
  if (precision == 0) precision = Real::default_precision();
  ApproxScalar q = ApproxScalar::from_exact(lookup(bindings, "q"), precision);
  return NumericEval{bindings, q, tol, precision}(e);
}

}  // namespace qforge::qseries
