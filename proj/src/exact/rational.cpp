#include "qforge/exact/rational.hpp"

#include <cctype>

#include "qforge/error.hpp"

namespace qforge {

std::string format_rational(const Rational& r) { return r.get_str(10); }

namespace {

bool valid_integer(std::string_view s, bool allow_sign) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!valid_integer(num, true) || !valid_integer(den, false))
    throw Error(ErrorKind::ParseError, "malformed rational '" + std::string(text) + "'");
  std::string n(num);
  if (n[0] == '+') n.erase(0, 1);
  Integer zn(n, 10), zd(std::string(den), 10);
  if (zd == 0) throw Error(ErrorKind::DivisionByZero, "rational with zero denominator");
  Rational r(zn, zd);
  r.canonicalize();
  return r;
}

}  // namespace qforge
