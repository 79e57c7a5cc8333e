#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qforge/qseries/closed_form.hpp"
#include "qforge/qseries/phi21.hpp"
#include "qforge/relations/relation.hpp"

namespace qforge::forge {

using qseries::Bindings;
using qseries::ClosedFormExpr;

enum class Mode { Exact, Numeric };
std::string to_string(Mode m);
Mode parse_mode(const std::string& text);

/// A decidable side condition of an identity.
struct Constraint {
  enum class Kind { NonNegInt, AbsLessThanOne, AbsQLessThanOne, NotOne, PrimitiveRoot };
  Kind kind;
  std::string sym;                    // NonNegInt, NotOne, PrimitiveRoot
  std::optional<ClosedFormExpr> expr; // AbsLessThanOne
  int order = 0;                      // PrimitiveRoot
  std::string label;

  nlohmann::json to_json() const;
  static Constraint from_json(const nlohmann::json& j);
};

/// Registry entry: phi(a, b; c; q, x) with each slot a closed-form expression, and
/// the closed-form right-hand side. Slots are evaluated in the order a, b, c, x; a slot
/// whose name is not already bound (sv1 binds only M, N and q) is bound to its value
/// before the next slot is read. A caller's binding of a slot name is never replaced.
struct IdentityRecord {
  std::string id;
  std::string description;
  std::optional<relations::ShiftVector> shift;  // relation the identity comes from
  Mode mode = Mode::Exact;                      // exact-terminating or numeric
  std::vector<std::string> params;              // symbols the caller binds besides q
  std::map<std::string, std::string> fixed;     // symbols with fixed scalar values
  std::array<ClosedFormExpr, 4> lhs;
  ClosedFormExpr rhs;
  std::vector<Constraint> constraints;

  nlohmann::json to_json() const;
  static IdentityRecord from_json(const nlohmann::json& j);
};

class Registry {
 public:
  static const Registry& builtin();
  static Registry from_json(const nlohmann::json& j);
  static Registry from_file(const std::string& path);

  const IdentityRecord& get(const std::string& id) const;  // NotInTable when missing
  const std::vector<IdentityRecord>& records() const { return records_; }
  nlohmann::json to_json() const;

 private:
  int version_ = 1;
  std::vector<IdentityRecord> records_;
};

// Adds the record's fixed symbols to the caller's bindings.
Bindings complete_bindings(const IdentityRecord& rec, const Bindings& bindings);

// Throws ConstraintViolated naming the first failing constraint.
void check_constraints(const IdentityRecord& rec, const Bindings& bindings);

// The left-hand side parameters at the bindings (exact).
qseries::ExactParams lhs_params(const IdentityRecord& rec, const Bindings& bindings);

enum class Status { Pass, Fail, Error };
std::string to_string(Status s);
Status parse_status(const std::string& text);

struct IdentityReport {
  std::string id;
  std::map<std::string, std::string> bindings;  // symbol -> exact text
  Status status = Status::Error;
  std::string lhs, rhs;  // value text, or empty on error
  double abs_err = 0.0;
  long terms_used = 0;
  bool exact = false;
  bool trivial = false;  // the sum equals 1
  std::string error;     // error kind and message when status is Error
};

/// Evaluates both sides. Exact mode demands equality in the cyclotomic field;
/// numeric mode passes iff |lhs - rhs| + err_lhs + err_rhs <= tol.
/// Constraint violations and evaluation failures propagate as exceptions.
IdentityReport verify_identity(const IdentityRecord& rec, const Bindings& bindings, double tol,
                               std::optional<Mode> mode = std::nullopt);

// As verify_identity but errors become a report with status Error.
IdentityReport verify_identity_noexcept(const IdentityRecord& rec, const Bindings& bindings, double tol,
                                        std::optional<Mode> mode = std::nullopt) noexcept;

}  // namespace qforge::forge
