#pragma once

#include <array>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qforge/relations/relation.hpp"

namespace qforge::symmetry {

using relations::RationalFunction;
using relations::ShiftVector;

// sigma_0 .. sigma_6. The last three are abbreviations for words in sigma_0 .. sigma_3.
enum class Generator : int { s0 = 0, s1, s2, s3, s4, s5, s6 };

/// Sequence of generators, applied left to right (the first entry acts first).
using GeneratorWord = std::vector<Generator>;

std::string to_string(const GeneratorWord& word);  // "s3 s2 s1", "id" when empty
GeneratorWord parse_word(std::string_view text);

// Expansion of sigma_4, sigma_5, sigma_6 into sigma_0 .. sigma_3.
const GeneratorWord& expansion(Generator g);
GeneratorWord expand(const GeneratorWord& word);

/// (k, l, m, n; a, b, c, x) with parameters as rational functions of free symbols.
struct FullPoint {
  ShiftVector shift;
  std::array<RationalFunction, 4> params;

  static FullPoint generic(const ShiftVector& s);  // params (a, b, c, x)
  friend bool operator==(const FullPoint&, const FullPoint&) = default;
};

ShiftVector apply_to_shift(Generator g, const ShiftVector& s);
ShiftVector apply_to_shift(const GeneratorWord& word, const ShiftVector& s);

// Throws UndefinedAction when the parameter map divides by an identically zero function.
FullPoint apply_generator(Generator g, const FullPoint& p);
FullPoint apply_word(const GeneratorWord& word, const FullPoint& p);

struct LambdaVector {
  int l1 = 0, l2 = 0, l3 = 0, l4 = 0;
  friend auto operator<=>(const LambdaVector&, const LambdaVector&) = default;
};

LambdaVector to_lambda(const ShiftVector& s);    // (k, l, -n, k + l - m)
ShiftVector from_lambda(const LambdaVector& v);  // (l1, l2, l1 + l2 - l4, -l3)

/// The five lambda-space maps generating T G' T^-1.
enum class LambdaMap : int { NegateAll = 0, Swap12, Swap13, Bar21, Bar123 };
inline constexpr std::array<LambdaMap, 5> kLambdaMaps{LambdaMap::NegateAll, LambdaMap::Swap12, LambdaMap::Swap13,
                                                      LambdaMap::Bar21, LambdaMap::Bar123};

LambdaVector apply_lambda_map(LambdaMap m, const LambdaVector& v);
// The generator word whose shift action the lambda map represents.
const GeneratorWord& lambda_map_word(LambdaMap m);

/// One element of the finite group generated by the lambda maps: an integer matrix
/// acting on column vectors, and a word realizing it.
struct GroupElement {
  std::array<std::array<int, 4>, 4> matrix;
  GeneratorWord word;

  LambdaVector apply(const LambdaVector& v) const;
};

// Closure by breadth-first search, computed once.
const std::vector<GroupElement>& lambda_group();

// lambda_4 >= 0 and lambda_4 / 2 <= lambda_3 <= lambda_1 <= lambda_2.
bool in_representative_set(const ShiftVector& s);

struct Representative {
  ShiftVector rep;
  GeneratorWord word;  // maps the input shift to rep
};

// Lexicographically smallest qualifying image; NoRepresentativeFound if none.
Representative canonical_representative(const ShiftVector& s);

// Breadth-first closure of {s} under the five lambda maps.
std::set<ShiftVector> orbit_enumerate(const ShiftVector& s);

}  // namespace qforge::symmetry
