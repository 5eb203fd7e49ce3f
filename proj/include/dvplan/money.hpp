#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace dvp {

// Fixed-point currency with six fractional digits. Sums are exact, which
// keeps reports byte-reproducible.
class Money {
 public:
  static constexpr std::int64_t kScale = 1'000'000;

  constexpr Money() = default;

  static constexpr Money from_micros(std::int64_t micros) {
    Money m;
    m.micros_ = micros;
    return m;
  }
  // Rounds half away from zero to the nearest micro-unit.
  static Money from_double(double amount);
  // Parses a plain decimal such as "0.239" or "-12.5". More than six
  // fractional digits is an error.
  static Money parse(std::string_view text);

  constexpr std::int64_t micros() const { return micros_; }
  double to_double() const { return static_cast<double>(micros_) / kScale; }
  std::string to_string() const;

  constexpr Money& operator+=(Money o) {
    micros_ += o.micros_;
    return *this;
  }
  friend constexpr Money operator+(Money a, Money b) { return a += b; }
  friend constexpr Money operator-(Money a, Money b) {
    return from_micros(a.micros_ - b.micros_);
  }
  friend constexpr auto operator<=>(Money, Money) = default;

 private:
  std::int64_t micros_ = 0;
};

}  // namespace dvp
