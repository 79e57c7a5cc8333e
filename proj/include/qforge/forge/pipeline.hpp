#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qforge/relations/relation.hpp"

namespace qforge::forge {

using relations::ExactPoint;
using relations::ParamFamily;
using relations::RationalFunction;
using relations::ShiftVector;
using relations::ThreeTermRelation;

inline constexpr std::uint64_t kDefaultSeed = 20240601;

enum class Execution { Serial, Parallel };

// Registered families for the five tabulated shifts plus the pattern families:
// (a,-a,-q,x) for (l,l,0,n) with n even, (a,b,c,c/(ab)) when k+l-m+n = 0,
// (a,b,bq/a,-q/a) for (k,l,l-k,-k) with l even, (zeta_l q, b, zeta_l b, 1) for (0,l,l,0).
std::vector<ParamFamily> solution_families(const ShiftVector& s);

struct FamilyCheck {
  bool passed = true;
  int first_failing_step = 0;  // N with Q^(N) != 0, or 0
  int evaluations = 0;         // successful evaluations
  int resamples = 0;           // points skipped for a zero denominator
};

/// Q^(N) = 0 for N = 1..n_max at `trials` random bindings of the free symbols and q
/// (numerators and denominators up to 97). Points hitting a zero denominator are
/// resampled; SamplingExhausted after 10 * trials candidates for one N.
FamilyCheck check_family_detailed(const ShiftVector& s, const ParamFamily& fam, int n_max, int trials,
                                  std::uint64_t seed = kDefaultSeed, Execution exec = Execution::Parallel,
                                  const ThreeTermRelation* relation = nullptr);
bool check_family(const ShiftVector& s, const ParamFamily& fam, int n_max, int trials,
                  std::uint64_t seed = kDefaultSeed);

/// R^(1) ... R^(N) after substituting the family; DegenerateFamily when a factor
/// has an identically vanishing denominator.
RationalFunction product_R(const ShiftVector& s, const ParamFamily& fam, int n,
                           const ThreeTermRelation* relation = nullptr);

struct PipelineStep {
  int N = 0;
  std::string lhs, product, telescoped;
  double residual = 0.0;
  bool exact = false;
  bool pass = false;
  std::string error;  // evaluation error, when the step could not be computed
};

struct PipelineRun {
  ShiftVector shift;
  std::string family;
  int n_max = 0;
  std::map<std::string, std::string> point;
  std::vector<PipelineStep> steps;

  bool all_pass() const;
  nlohmann::json to_json() const;
};

/// For N = 1..n_max, compares phi(base) with phi(shifted by N) / (R^(1)...R^(N)).
/// `values` binds the family's free symbols and q. Exact when both series terminate,
/// numeric (|difference| <= tol) otherwise.
PipelineRun telescoped_check(const ShiftVector& s, const ParamFamily& fam, int n_max, const ExactPoint& values,
                             double tol, const ThreeTermRelation* relation = nullptr);

// Exact value of the telescoped right-hand side at step N, when both series terminate.
ExactScalar telescoped_value(const ShiftVector& s, const ParamFamily& fam, int N, const ExactPoint& values,
                             const ThreeTermRelation& relation);

/// Coefficient comparison behind the (1 - a^{N+1})/(1 - a) identity: for each
/// N <= n_max and q in `qs`, the Cauchy coefficient of x^N in the product of the two
/// q-binomial series, the geometric coefficient, the rearranged sum and the
/// terminating series all agree. DegenerateParameter when a = 1.
bool sv5_cauchy_check(const ExactScalar& a, int n_max,
                      const std::vector<Rational>& qs = {Rational(1, 2), Rational(2, 3)});

struct ConjectureStep {
  std::string name;
  std::string status;  // pass | fail | error | skipped
  std::string detail;
};

struct ConjectureReport {
  std::string pattern;
  ShiftVector instance;
  std::vector<ConjectureStep> steps;

  bool all_pass() const;
  nlohmann::json to_json() const;
};

// Pattern ids: "llon-even", "balanced", "kummer", "root-of-unity".
const std::vector<std::string>& conjecture_patterns();
bool matches_pattern(const std::string& pattern, const ShiftVector& s);

/// Runs check_family with a derived relation and, where the pattern predicts a known
/// identity, the telescoped comparison against it. Reports per step; never asserts
/// the conjecture.
ConjectureReport conjecture_check(const std::string& pattern, const ShiftVector& instance, int trials,
                                  std::uint64_t seed = kDefaultSeed, int n_max = 4);

}  // namespace qforge::forge
