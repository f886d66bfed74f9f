#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace djnmr {

// Exact rational multiple of pi: angle = (num / den) * pi with den > 0 and
// gcd(num, den) = 1.
class PiFraction {
 public:
  constexpr PiFraction() = default;
  PiFraction(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double radians() const;
  double over_pi() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_zero() const { return num_ == 0; }

  // Representative in (-pi, pi]; differs from *this by a multiple of 2 pi.
  PiFraction canonical() const;

  // "pi", "-pi/2", "3pi/4", "0"
  std::string to_string() const;
  // "1", "-1/2", "3/4"
  std::string ratio_string() const;

  friend PiFraction operator+(PiFraction a, PiFraction b);
  friend PiFraction operator-(PiFraction a, PiFraction b);
  friend PiFraction operator-(PiFraction a) { return PiFraction(-a.num_, a.den_); }
  friend bool operator==(const PiFraction&, const PiFraction&) = default;
  friend bool operator<(PiFraction a, PiFraction b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// Parses a multiple of pi given as "1/2", "-0.5", "1.5", "pi/2", "-pi",
// "3pi/4". Throws std::invalid_argument on malformed input.
PiFraction parse_pi_fraction(std::string_view text);

}  // namespace djnmr
