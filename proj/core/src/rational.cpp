#include "xmr/rational.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <ostream>

#include "xmr/error.hpp"
#include "xmr/types.hpp"

namespace xmr {

bool contains_all(ItemSpan haystack, ItemSpan needle) noexcept {
  return std::includes(haystack.begin(), haystack.end(), needle.begin(), needle.end());
}

bool is_strictly_ascending(ItemSpan items) noexcept {
  return std::adjacent_find(items.begin(), items.end(), std::greater_equal<>{}) == items.end();
}

Rational::Rational(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  const std::uint64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
  __extension__ typedef unsigned __int128 Wide;
  return static_cast<Wide>(a.num_) * b.den_ <=> static_cast<Wide>(b.num_) * a.den_;
}

std::string Rational::to_string() const {
  return std::to_string(num_) + "/" + std::to_string(den_);
}

namespace {

std::uint64_t parse_uint(std::string_view digits, std::string_view whole) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty()) {
    throw ParseError("not a non-negative rational: '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  const std::string_view whole = text;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    return Rational(parse_uint(text.substr(0, slash), whole), parse_uint(text.substr(slash + 1), whole));
  }
  std::uint64_t scale = 1;
  if (!text.empty() && text.back() == '%') {
    text.remove_suffix(1);
    scale = 100;
  }
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return Rational(parse_uint(text, whole), scale);

  const std::string_view int_part = text.substr(0, dot);
  const std::string_view frac_part = text.substr(dot + 1);
  if (frac_part.size() > 18) throw ParseError("too many decimal places: '" + std::string(whole) + "'");
  std::uint64_t den = 1;
  for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
  const std::uint64_t ip = int_part.empty() ? 0 : parse_uint(int_part, whole);
  const std::uint64_t fp = frac_part.empty() ? 0 : parse_uint(frac_part, whole);
  if (ip > (std::numeric_limits<std::uint64_t>::max() - fp) / den) {
    throw ParseError("rational out of range: '" + std::string(whole) + "'");
  }
  return Rational(ip * den + fp, den * scale);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

}  // namespace xmr
