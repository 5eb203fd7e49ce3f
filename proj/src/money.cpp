#include "dvplan/money.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "dvplan/error.hpp"

namespace dvp {

Money Money::from_double(double amount) {
  if (!std::isfinite(amount)) {
    throw Error(ErrorKind::kInvalidInput, "money amount is not finite");
  }
  const double scaled = amount * static_cast<double>(kScale);
  if (std::fabs(scaled) >= 9.0e18) {
    throw Error(ErrorKind::kInvalidInput, "money amount out of range");
  }
  return from_micros(std::llround(scaled));
}

Money Money::parse(std::string_view text) {
  auto bad = [&]() {
    return Error(ErrorKind::kInvalidInput,
                 "malformed money value '" + std::string(text) + "'");
  };
  if (text.empty()) throw bad();
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  std::int64_t whole = 0;
  std::int64_t frac = 0;
  int frac_digits = 0;
  bool seen_digit = false;
  bool in_frac = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c == '.') {
      if (in_frac) throw bad();
      in_frac = true;
      continue;
    }
    if (c < '0' || c > '9') throw bad();
    seen_digit = true;
    if (in_frac) {
      if (++frac_digits > 6) throw bad();
      frac = frac * 10 + (c - '0');
    } else {
      if (whole > std::numeric_limits<std::int64_t>::max() / 10 / kScale) throw bad();
      whole = whole * 10 + (c - '0');
    }
  }
  if (!seen_digit) throw bad();
  for (int i = frac_digits; i < 6; ++i) frac *= 10;
  const std::int64_t micros = whole * kScale + frac;
  return from_micros(negative ? -micros : micros);
}

std::string Money::to_string() const {
  const bool negative = micros_ < 0;
  // Avoids overflow on INT64_MIN by working in unsigned space.
  const std::uint64_t mag = negative ? 0 - static_cast<std::uint64_t>(micros_)
                                     : static_cast<std::uint64_t>(micros_);
  std::string frac = std::to_string(mag % kScale);
  frac.insert(0, 6 - frac.size(), '0');
  return (negative ? "-" : "") + std::to_string(mag / kScale) + "." + frac;
}

}  // namespace dvp
