#pragma once

#include <random>

#include "qforge/exact/cyclotomic.hpp"
#include "qforge/exact/sampling.hpp"

namespace qforge::testing {

using qforge::random_in;
using qforge::random_rational;

inline ExactScalar random_cyclo(std::mt19937_64& rng, int order, long bound = 9) {
  std::vector<Rational> c(euler_phi(order));
  for (auto& v : c) v = random_rational(rng, bound);
  return cyclo_normalize(c, order);
}

}  // namespace qforge::testing
