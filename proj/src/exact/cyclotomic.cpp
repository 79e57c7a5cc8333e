#include "qforge/exact/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <shared_mutex>

#include "qforge/error.hpp"

namespace qforge {

namespace {

using Coeffs = std::vector<Rational>;

void trim(Coeffs& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Coeffs poly_mul(const Coeffs& a, const Coeffs& b) {
  if (a.empty() || b.empty()) return {};
  Coeffs out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  trim(out);
  return out;
}

Coeffs poly_sub(const Coeffs& a, const Coeffs& b) {
  Coeffs out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  trim(out);
  return out;
}

// Long division; divisor must be non-zero.
void poly_divmod(Coeffs num, const Coeffs& den, Coeffs& quot, Coeffs& rem) {
  trim(num);
  quot.clear();
  if (num.size() < den.size()) {
    rem = std::move(num);
    return;
  }
  quot.assign(num.size() - den.size() + 1, Rational(0));
  const Rational& lead = den.back();
  for (std::size_t i = num.size(); i-- >= den.size();) {
    if (num[i] == 0) continue;
    Rational f = num[i] / lead;
    std::size_t shift = i - (den.size() - 1);
    quot[shift] = f;
    for (std::size_t j = 0; j < den.size(); ++j) num[shift + j] -= f * den[j];
  }
  trim(num);
  trim(quot);
  rem = std::move(num);
}

std::shared_mutex cache_mutex;
std::map<int, Coeffs> phi_cache;

}  // namespace

int euler_phi(int n) {
  int result = n;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

const Coeffs& cyclotomic_polynomial(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidDomain, "cyclotomic order must be positive");
  {
    std::shared_lock lock(cache_mutex);
    if (auto it = phi_cache.find(n); it != phi_cache.end()) return it->second;
  }
  // x^n - 1 divided by Phi_d for every proper divisor d.
  Coeffs poly(n + 1, Rational(0));
  poly[0] = -1;
  poly[n] = 1;
  for (int d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    Coeffs q, r;
    poly_divmod(poly, cyclotomic_polynomial(d), q, r);
    poly = std::move(q);
  }
  std::unique_lock lock(cache_mutex);
  return phi_cache.emplace(n, std::move(poly)).first->second;
}

ExactScalar::ExactScalar() : coeffs_{Rational(0)} {}

ExactScalar::ExactScalar(long value) : coeffs_{Rational(value)} {}

ExactScalar::ExactScalar(const Rational& value) : coeffs_{value} {}

ExactScalar ExactScalar::root_of_unity(int order, long power) {
  if (order < 1) throw Error(ErrorKind::InvalidDomain, "root of unity order must be positive");
  long e = ((power % order) + order) % order;
  Coeffs c(e + 1, Rational(0));
  c[e] = 1;
  return cyclo_normalize(c, order);
}

ExactScalar cyclo_normalize(std::span<const Rational> coeffs, int order) {
  const Coeffs& phi = cyclotomic_polynomial(order);
  std::size_t width = phi.size() - 1;
  Coeffs q, r;
  poly_divmod(Coeffs(coeffs.begin(), coeffs.end()), phi, q, r);
  r.resize(width, Rational(0));
  ExactScalar out;
  out.order_ = order;
  out.coeffs_ = std::move(r);
  return out;
}

bool ExactScalar::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

bool ExactScalar::is_one() const {
  if (coeffs_[0] != 1) return false;
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return false;
  return true;
}

bool ExactScalar::is_rational() const {
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return false;
  return true;
}

Rational ExactScalar::to_rational() const {
  if (!is_rational()) throw Error(ErrorKind::ConstraintViolated, "value " + to_string() + " is not rational");
  return coeffs_[0];
}

ExactScalar ExactScalar::embed(int target) const {
  if (target == order_) return *this;
  if (target % order_ != 0)
    throw Error(ErrorKind::InvalidDomain, "cannot embed order " + std::to_string(order_) + " into " +
                                              std::to_string(target));
  if (is_rational()) {
    Coeffs c{coeffs_[0]};
    return cyclo_normalize(c, target);
  }
  int stride = target / order_;
  Coeffs c((coeffs_.size() - 1) * stride + 1, Rational(0));
  for (std::size_t j = 0; j < coeffs_.size(); ++j) c[j * stride] = coeffs_[j];
  return cyclo_normalize(c, target);
}

namespace {

int common_order(const ExactScalar& a, const ExactScalar& b) {
  return std::lcm(a.order(), b.order());
}

}  // namespace

ExactScalar ExactScalar::operator-() const {
  ExactScalar out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& rhs) {
  if (order_ != rhs.order_) {
    int l = common_order(*this, rhs);
    *this = embed(l);
    return *this += rhs.embed(l);
  }
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& rhs) {
  if (order_ != rhs.order_) {
    int l = common_order(*this, rhs);
    *this = embed(l);
    return *this -= rhs.embed(l);
  }
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

ExactScalar& ExactScalar::operator*=(const ExactScalar& rhs) {
  if (order_ != rhs.order_) {
    int l = common_order(*this, rhs);
    *this = embed(l);
    return *this *= rhs.embed(l);
  }
  if (order_ == 1 || order_ == 2) {
    coeffs_[0] *= rhs.coeffs_[0];
    return *this;
  }
  if (rhs.is_rational()) {
    for (auto& c : coeffs_) c *= rhs.coeffs_[0];
    return *this;
  }
  Coeffs prod = poly_mul(coeffs_, rhs.coeffs_);
  *this = cyclo_normalize(prod, order_);
  return *this;
}

ExactScalar ExactScalar::inverse() const {
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
  if (is_rational()) {
    Coeffs c{1 / coeffs_[0]};
    return cyclo_normalize(c, order_);
  }
  // Extended Euclid: track s with s * self == r (mod Phi_n).
  Coeffs r0 = cyclotomic_polynomial(order_);
  Coeffs r1 = coeffs_;
  trim(r1);
  Coeffs s0, s1{Rational(1)};
  while (!(r1.size() == 1)) {
    Coeffs q, r;
    poly_divmod(r0, r1, q, r);
    Coeffs s = poly_sub(s0, poly_mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  Rational inv = 1 / r1[0];
  for (auto& c : s1) c *= inv;
  return cyclo_normalize(s1, order_);
}

ExactScalar& ExactScalar::operator/=(const ExactScalar& rhs) {
  if (rhs.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by zero");
  if (rhs.is_rational()) {
    for (auto& c : coeffs_) c /= rhs.coeffs_[0];
    if (rhs.order_ != order_ && rhs.order_ != 1) *this = embed(common_order(*this, rhs));
    return *this;
  }
  return *this *= rhs.inverse();
}

ExactScalar ExactScalar::pow(long exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  ExactScalar base = *this;
  ExactScalar out = ExactScalar(1).embed(order_);
  while (exponent > 0) {
    if (exponent & 1) out *= base;
    exponent >>= 1;
    if (exponent > 0) base *= base;
  }
  return out;
}

bool operator==(const ExactScalar& lhs, const ExactScalar& rhs) {
  if (lhs.order_ != rhs.order_) {
    if (lhs.is_rational() && rhs.is_rational()) return lhs.coeffs_[0] == rhs.coeffs_[0];
    int l = common_order(lhs, rhs);
    return lhs.embed(l) == rhs.embed(l);
  }
  return lhs.coeffs_ == rhs.coeffs_;
}

std::complex<double> ExactScalar::to_complex() const {
  std::complex<double> out{0.0, 0.0};
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / order_;
    out += coeffs_[j].get_d() * std::complex<double>(std::cos(angle), std::sin(angle));
  }
  return out;
}

std::string ExactScalar::to_string() const {
  if (order_ == 1) return format_rational(coeffs_[0]);
  std::string s = "cyclo(" + std::to_string(order_) + ")[";
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) s += ", ";
    s += format_rational(coeffs_[i]);
  }
  return s + "]";
}

ExactScalar ExactScalar::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (!text.starts_with("cyclo(")) return ExactScalar(parse_rational(text));
  auto close = text.find(')');
  auto open = text.find('[', close == std::string_view::npos ? 0 : close);
  if (close == std::string_view::npos || open != close + 1 || !text.ends_with("]"))
    throw Error(ErrorKind::ParseError, "malformed cyclotomic literal '" + std::string(text) + "'");
  Rational order = parse_rational(text.substr(6, close - 6));
  if (order.get_den() != 1 || order < 1)
    throw Error(ErrorKind::ParseError, "cyclotomic order must be a positive integer");
  std::string_view body = text.substr(open + 1, text.size() - open - 2);
  Coeffs coeffs;
  while (!body.empty()) {
    auto comma = body.find(',');
    coeffs.push_back(parse_rational(body.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  if (coeffs.empty()) coeffs.emplace_back(0);
  return cyclo_normalize(coeffs, static_cast<int>(order.get_num().get_si()));
}

ExactScalar field_div(const ExactScalar& x, const ExactScalar& y) { return x / y; }

}  // namespace qforge
