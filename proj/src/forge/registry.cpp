#include "qforge/forge/registry.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qforge/error.hpp"
#include "qforge/registry_data.hpp"

namespace qforge::forge {

using nlohmann::json;

std::string to_string(Mode m) { return m == Mode::Exact ? "exact" : "numeric"; }

Mode parse_mode(const std::string& text) {
  if (text == "exact") return Mode::Exact;
  if (text == "numeric") return Mode::Numeric;
  throw Error(ErrorKind::ParseError, "mode must be exact or numeric, got '" + text + "'");
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Error: return "error";
  }
  return "error";
}

Status parse_status(const std::string& text) {
  if (text == "pass") return Status::Pass;
  if (text == "fail") return Status::Fail;
  if (text == "error") return Status::Error;
  throw Error(ErrorKind::ParseError, "unknown status '" + text + "'");
}

// ---------------------------------------------------------------- JSON

namespace {

const std::array<std::pair<Constraint::Kind, const char*>, 5> kKindNames{{
    {Constraint::Kind::NonNegInt, "nonneg_int"},
    {Constraint::Kind::AbsLessThanOne, "abs_lt_1"},
    {Constraint::Kind::AbsQLessThanOne, "abs_q_lt_1"},
    {Constraint::Kind::NotOne, "not_one"},
    {Constraint::Kind::PrimitiveRoot, "primitive_root"},
}};

constexpr std::array<const char*, 4> kSlots{"a", "b", "c", "x"};

}  // namespace

json Constraint::to_json() const {
  json j;
  for (auto [k, name] : kKindNames)
    if (k == kind) j["kind"] = name;
  if (!sym.empty()) j["sym"] = sym;
  if (expr) j["expr"] = expr->to_json();
  if (kind == Kind::PrimitiveRoot) j["order"] = order;
  if (!label.empty()) j["label"] = label;
  return j;
}

Constraint Constraint::from_json(const json& j) {
  Constraint c{};
  std::string kind = j.at("kind").get<std::string>();
  bool found = false;
  for (auto [k, name] : kKindNames)
    if (kind == name) {
      c.kind = k;
      found = true;
    }
  if (!found) throw Error(ErrorKind::ParseError, "unknown constraint kind '" + kind + "'");
  c.sym = j.value("sym", std::string());
  if (j.contains("expr")) c.expr = ClosedFormExpr::from_json(j.at("expr"));
  c.order = j.value("order", 0);
  c.label = j.value("label", std::string());
  if ((c.kind == Kind::NonNegInt || c.kind == Kind::NotOne || c.kind == Kind::PrimitiveRoot) && c.sym.empty())
    throw Error(ErrorKind::ParseError, "constraint '" + kind + "' needs a symbol");
  if (c.kind == Kind::AbsLessThanOne && !c.expr) throw Error(ErrorKind::ParseError, "abs_lt_1 needs an expression");
  return c;
}

json IdentityRecord::to_json() const {
  json j;
  j["id"] = id;
  j["description"] = description;
  if (shift) j["shift"] = shift->as_array();
  j["mode"] = to_string(mode);
  j["params"] = params;
  if (!fixed.empty()) j["fixed"] = fixed;
  json l = json::object();
  for (int i = 0; i < 4; ++i) l[kSlots[i]] = lhs[i].to_json();
  j["lhs"] = l;
  j["rhs"] = rhs.to_json();
  json cs = json::array();
  for (const auto& c : constraints) cs.push_back(c.to_json());
  j["constraints"] = cs;
  return j;
}

IdentityRecord IdentityRecord::from_json(const json& j) {
  try {
    IdentityRecord r;
    r.id = j.at("id").get<std::string>();
    r.description = j.value("description", std::string());
    if (j.contains("shift") && !j.at("shift").is_null()) {
      auto s = j.at("shift").get<std::array<int, 4>>();
      r.shift = relations::ShiftVector{s[0], s[1], s[2], s[3]};
    }
    r.mode = parse_mode(j.at("mode").get<std::string>());
    r.params = j.value("params", std::vector<std::string>{});
    r.fixed = j.value("fixed", std::map<std::string, std::string>{});
    for (int i = 0; i < 4; ++i) r.lhs[i] = ClosedFormExpr::from_json(j.at("lhs").at(kSlots[i]));
    r.rhs = ClosedFormExpr::from_json(j.at("rhs"));
    for (const auto& c : j.value("constraints", json::array())) r.constraints.push_back(Constraint::from_json(c));
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("identity record: ") + e.what());
  }
}

Registry Registry::from_json(const json& j) {
  Registry r;
  try {
    r.version_ = j.value("version", 1);
    for (const auto& rec : j.at("identities")) r.records_.push_back(IdentityRecord::from_json(rec));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("registry: ") + e.what());
  }
  return r;
}

Registry Registry::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Usage, "cannot open registry file " + path);
  try {
    return from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, "registry file " + path + ": " + e.what());
  }
}

const Registry& Registry::builtin() {
  static const Registry r = from_json(json::parse(kBuiltinRegistry));
  return r;
}

const IdentityRecord& Registry::get(const std::string& id) const {
  for (const auto& r : records_)
    if (r.id == id) return r;
  throw Error(ErrorKind::NotInTable, "unknown identity '" + id + "'");
}

json Registry::to_json() const {
  json arr = json::array();
  for (const auto& r : records_) arr.push_back(r.to_json());
  return {{"version", version_}, {"identities", arr}};
}

// ---------------------------------------------------------------- evaluation

Bindings complete_bindings(const IdentityRecord& rec, const Bindings& bindings) {
  Bindings out = bindings;
  for (const auto& [sym, text] : rec.fixed) out[sym] = ExactScalar::parse(text);
  return out;
}

namespace {

const ExactScalar& bound(const Bindings& b, const std::string& sym) {
  auto it = b.find(sym);
  if (it == b.end()) throw Error(ErrorKind::ConstraintViolated, "symbol " + sym + " is not bound");
  return it->second;
}

bool is_primitive_root(const ExactScalar& w, int order) {
  if (order < 1) return false;
  if (!w.pow(order).is_one()) return false;
  for (int d = 1; d < order; ++d)
    if (order % d == 0 && w.pow(d).is_one()) return false;
  return true;
}

}  // namespace

void check_constraints(const IdentityRecord& rec, const Bindings& b) {
  bound(b, "q");
  for (const auto& p : rec.params) bound(b, p);
  for (const auto& c : rec.constraints) {
    switch (c.kind) {
      case Constraint::Kind::NonNegInt: {
        const ExactScalar& v = bound(b, c.sym);
        if (!v.is_rational() || v.to_rational().get_den() != 1 || v.to_rational() < 0)
          throw Error(ErrorKind::ConstraintViolated, c.sym + " must be a non-negative integer");
        break;
      }
      case Constraint::Kind::AbsQLessThanOne:
        if (std::abs(bound(b, "q").to_complex()) >= 1.0)
          throw Error(ErrorKind::ConstraintViolated, "|q| < 1 is required");
        break;
      case Constraint::Kind::AbsLessThanOne: {
        ExactScalar v = qseries::closed_form_eval_exact(*c.expr, b);
        if (std::abs(v.to_complex()) >= 1.0)
          throw Error(ErrorKind::ConstraintViolated, (c.label.empty() ? "|expr| < 1" : c.label) + " is violated");
        break;
      }
      case Constraint::Kind::NotOne:
        if (bound(b, c.sym).is_one()) throw Error(ErrorKind::ConstraintViolated, c.sym + " must differ from 1");
        break;
      case Constraint::Kind::PrimitiveRoot:
        if (!is_primitive_root(bound(b, c.sym), c.order))
          throw Error(ErrorKind::ConstraintViolated,
                      c.sym + " must be a primitive root of unity of order " + std::to_string(c.order));
        break;
    }
  }
}

qseries::ExactParams lhs_params(const IdentityRecord& rec, const Bindings& bindings) {
  Bindings b = bindings;
  std::array<ExactScalar, 4> v;
  for (int i = 0; i < 4; ++i) {
    v[i] = qseries::closed_form_eval_exact(rec.lhs[i], b);
    if (!bindings.count(kSlots[i])) b[kSlots[i]] = v[i];
  }
  return {v[0], v[1], v[2], bound(bindings, "q"), v[3]};
}

IdentityReport verify_identity(const IdentityRecord& rec, const Bindings& given, double tol, std::optional<Mode> mode) {
  Mode m = mode.value_or(rec.mode);
  Bindings b = complete_bindings(rec, given);
  IdentityReport rep;
  rep.id = rec.id;
  for (const auto& [k, v] : given) rep.bindings[k] = v.to_string();
  check_constraints(rec, b);
  if (m == Mode::Exact && rec.rhs.has_infinite_factor())
    throw Error(ErrorKind::ConstraintViolated, "identity " + rec.id + " has infinite products; use numeric mode");
  qseries::ExactParams p = lhs_params(rec, b);
  // Unbound slot names carry the slot values into the right-hand side, as in lhs_params.
  Bindings rb = b;
  const std::array<ExactScalar, 4> slot_values{p.a, p.b, p.c, p.x};
  for (int i = 0; i < 4; ++i)
    if (!b.count(kSlots[i])) rb[kSlots[i]] = slot_values[i];
  if (m == Mode::Exact) {
    auto lhs = qseries::phi21_exact(p);
    ExactScalar rhs = qseries::closed_form_eval_exact(rec.rhs, rb);
    rep.exact = true;
    rep.lhs = lhs.value.to_string();
    rep.rhs = rhs.to_string();
    rep.terms_used = lhs.terms_used;
    rep.abs_err = std::abs((lhs.value - rhs).to_complex());
    rep.status = lhs.value == rhs ? Status::Pass : Status::Fail;
    rep.trivial = lhs.value.is_one();
  } else {
    // The series and product truncations are relative, so the inner tolerance is
    // scaled down by the magnitude of the value to keep the absolute error below tol.
    // The factor 1000 leaves room for the tail bounds, which exceed the last term by
    // 1/(1 - rho) when the ratio rho is close to 1.
    auto lhs = qseries::phi21_numeric(qseries::to_numeric(p), tol / 1000);
    const double scale = lhs.value.magnitude_d() + 1.0;
    if (scale > 1.5) lhs = qseries::phi21_numeric(qseries::to_numeric(p), tol / (1000 * scale));
    ApproxScalar rhs = qseries::closed_form_eval_numeric(rec.rhs, rb, tol / (1000 * scale));
    rep.lhs = lhs.value.to_string(20);
    rep.rhs = rhs.to_string(20);
    rep.terms_used = lhs.terms_used;
    rep.abs_err = distance(lhs.value, rhs);
    rep.status = rep.abs_err + lhs.value.err + rhs.err <= tol ? Status::Pass : Status::Fail;
    rep.trivial = distance(lhs.value, ApproxScalar(1)) <= tol;
  }
  return rep;
}

IdentityReport verify_identity_noexcept(const IdentityRecord& rec, const Bindings& bindings, double tol,
                                        std::optional<Mode> mode) noexcept {
  try {
    return verify_identity(rec, bindings, tol, mode);
  } catch (const std::exception& e) {
    IdentityReport rep;
    rep.id = rec.id;
    try {
      for (const auto& [k, v] : bindings) rep.bindings[k] = v.to_string();
    } catch (...) {
    }
    rep.status = Status::Error;
    rep.error = e.what();
    return rep;
  }
}

}  // namespace qforge::forge
