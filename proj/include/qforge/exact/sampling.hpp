#pragma once

#include <random>

#include "qforge/exact/rational.hpp"

namespace qforge {

// Deterministic rational sampling shared by the checkers and the tests.
// Numerators and denominators stay within `bound`.
inline Rational random_rational(std::mt19937_64& rng, long bound = 97, bool allow_zero = true) {
  std::uniform_int_distribution<long> num(-bound, bound), den(1, bound);
  for (;;) {
    Rational r(num(rng), den(rng));
    r.canonicalize();
    if (allow_zero || r != 0) return r;
  }
}

// Rational strictly inside (lo, hi).
inline Rational random_in(std::mt19937_64& rng, const Rational& lo, const Rational& hi, long bound = 97) {
  std::uniform_int_distribution<long> den(2, bound);
  for (;;) {
    long d = den(rng);
    std::uniform_int_distribution<long> num(0, d);
    Rational t(num(rng), d);
    t.canonicalize();
    Rational r = lo + (hi - lo) * t;
    if (r > lo && r < hi) return r;
  }
}

}  // namespace qforge
