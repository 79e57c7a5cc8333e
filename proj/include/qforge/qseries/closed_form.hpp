#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qforge/exact/approx.hpp"
#include "qforge/exact/cyclotomic.hpp"

namespace qforge::qseries {

using Bindings = std::map<std::string, ExactScalar>;

/// Integer-valued expression: an integer-coefficient polynomial in bound symbols
/// divided by a positive constant, e.g. N(N+1)/2. Used for q-exponents, powers and
/// q-Pochhammer lengths.
class IntExpr {
 public:
  using Powers = std::map<std::string, int>;

  IntExpr() = default;
  IntExpr(long constant);  // NOLINT(google-explicit-constructor)
  static IntExpr symbol(const std::string& name);

  IntExpr operator+(const IntExpr& rhs) const;
  IntExpr operator-(const IntExpr& rhs) const;
  IntExpr operator*(const IntExpr& rhs) const;
  IntExpr divided_by(long divisor) const;

  // Throws ConstraintViolated when a symbol is unbound, not an integer, or the
  // division is not exact.
  long evaluate(const Bindings& bindings) const;

  nlohmann::json to_json() const;
  static IntExpr from_json(const nlohmann::json& j);

  friend bool operator==(const IntExpr&, const IntExpr&) = default;

 private:
  std::map<Powers, long> terms_;
  long divisor_ = 1;
};

class ClosedFormExpr {
 public:
  struct Lit { ExactScalar value; };
  struct Sym { std::string name; };
  struct QPow { IntExpr exponent; };
  struct QPoch {
    std::shared_ptr<const ClosedFormExpr> base;
    int step = 1;                   // base q^step
    std::optional<IntExpr> length;  // nullopt means infinite
  };
  struct Mul { std::vector<ClosedFormExpr> factors; };
  struct Div { std::shared_ptr<const ClosedFormExpr> num, den; };
  struct Add { std::vector<ClosedFormExpr> terms; };
  struct Sub { std::shared_ptr<const ClosedFormExpr> lhs, rhs; };
  struct Pow { std::shared_ptr<const ClosedFormExpr> base; IntExpr exponent; };
  using Node = std::variant<Lit, Sym, QPow, QPoch, Mul, Div, Add, Sub, Pow>;

  ClosedFormExpr();
  explicit ClosedFormExpr(Node node);

  static ClosedFormExpr lit(const ExactScalar& v);
  static ClosedFormExpr sym(const std::string& name);
  static ClosedFormExpr qpow(IntExpr e);
  static ClosedFormExpr qpoch(const ClosedFormExpr& base, int step, std::optional<IntExpr> length);
  static ClosedFormExpr mul(std::vector<ClosedFormExpr> factors);
  static ClosedFormExpr div(const ClosedFormExpr& num, const ClosedFormExpr& den);
  static ClosedFormExpr add(std::vector<ClosedFormExpr> terms);
  static ClosedFormExpr sub(const ClosedFormExpr& lhs, const ClosedFormExpr& rhs);
  static ClosedFormExpr pow(const ClosedFormExpr& base, IntExpr exponent);

  const Node& node() const { return *node_; }
  bool has_infinite_factor() const;

  nlohmann::json to_json() const;
  static ClosedFormExpr from_json(const nlohmann::json& j);

 private:
  std::shared_ptr<const Node> node_;
};

enum class EvalMode { Exact, Numeric };

// Exact evaluation; the symbol "q" must be bound. Throws ZeroDenominator,
// InvalidDomain (infinite factor in exact mode).
ExactScalar closed_form_eval_exact(const ClosedFormExpr& e, const Bindings& bindings);

// Numeric evaluation; infinite q-Pochhammer factors are truncated at tol.
ApproxScalar closed_form_eval_numeric(const ClosedFormExpr& e, const Bindings& bindings, double tol,
                                      mpfr_prec_t precision = 0);

}  // namespace qforge::qseries
