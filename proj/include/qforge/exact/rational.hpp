#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace qforge {

using Rational = mpq_class;
using Integer = mpz_class;

// Canonical text form: "p/q" in lowest terms with the sign on p; integers print as "p".
std::string format_rational(const Rational& r);
Rational parse_rational(std::string_view text);

}  // namespace qforge
