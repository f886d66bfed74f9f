#include "djnmr/angle.hpp"

#include <charconv>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace djnmr {

PiFraction::PiFraction(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("PiFraction: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

double PiFraction::radians() const { return over_pi() * std::numbers::pi; }

PiFraction PiFraction::canonical() const {
  // Reduce num/den into (-1, 1].
  const std::int64_t period = 2 * den_;
  std::int64_t n = num_ % period;
  if (n <= -den_) n += period;
  if (n > den_) n -= period;
  return PiFraction(n, den_);
}

std::string PiFraction::to_string() const {
  if (num_ == 0) return "0";
  std::string out;
  if (num_ < 0) out += '-';
  const std::int64_t a = num_ < 0 ? -num_ : num_;
  if (a != 1) out += std::to_string(a);
  out += "pi";
  if (den_ != 1) out += "/" + std::to_string(den_);
  return out;
}

std::string PiFraction::ratio_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

PiFraction operator+(PiFraction a, PiFraction b) {
  return PiFraction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

PiFraction operator-(PiFraction a, PiFraction b) { return a + (-b); }

bool operator<(PiFraction a, PiFraction b) { return a.num_ * b.den_ < b.num_ * a.den_; }

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("invalid angle '" + std::string(whole) + "'");
  }
  return v;
}

// Exact decimal such as "-1.25" -> -125/100.
PiFraction parse_decimal(std::string_view s, std::string_view whole) {
  const auto dot = s.find('.');
  if (dot == std::string_view::npos) return PiFraction(parse_int(s, whole));
  std::string_view int_part = s.substr(0, dot);
  std::string_view frac_part = s.substr(dot + 1);
  if (frac_part.empty() || frac_part.size() > 9 || frac_part.find_first_not_of("0123456789") != std::string_view::npos) {
    throw std::invalid_argument("invalid angle '" + std::string(whole) + "'");
  }
  bool negative = false;
  if (!int_part.empty() && (int_part[0] == '-' || int_part[0] == '+')) {
    negative = int_part[0] == '-';
    int_part.remove_prefix(1);
  }
  const std::int64_t ip = int_part.empty() ? 0 : parse_int(int_part, whole);
  if (ip < 0) throw std::invalid_argument("invalid angle '" + std::string(whole) + "'");
  std::int64_t scale = 1;
  for (std::size_t k = 0; k < frac_part.size(); ++k) scale *= 10;
  const std::int64_t fp = parse_int(frac_part, whole);
  const std::int64_t num = ip * scale + fp;
  return PiFraction(negative ? -num : num, scale);
}

}  // namespace

PiFraction parse_pi_fraction(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw std::invalid_argument("invalid angle '" + std::string(text) + "'");

  std::string_view numer = s;
  std::string_view denom;
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    numer = s.substr(0, slash);
    denom = s.substr(slash + 1);
    if (denom.empty()) throw std::invalid_argument("invalid angle '" + std::string(text) + "'");
  }
  if (const auto pi = numer.find("pi"); pi != std::string_view::npos) {
    if (pi + 2 != numer.size()) throw std::invalid_argument("invalid angle '" + std::string(text) + "'");
    numer = numer.substr(0, pi);
    if (numer.empty()) numer = "1";
  }
  if (numer.find_first_of("+-") != std::string_view::npos) {
    throw std::invalid_argument("invalid angle '" + std::string(text) + "'");
  }
  PiFraction value = parse_decimal(numer, text);
  if (!denom.empty()) {
    const std::int64_t d = parse_int(denom, text);
    if (d <= 0) throw std::invalid_argument("invalid angle '" + std::string(text) + "'");
    value = PiFraction(value.num(), value.den() * d);
  }
  return negative ? -value : value;
}

}  // namespace djnmr
