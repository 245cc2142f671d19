#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace xmr {

/// Non-negative exact fraction in lowest terms. Ordering is decided by
/// cross-multiplication, never by converting to floating point.
class Rational {
 public:
  constexpr Rational() = default;
  /// Throws DomainError when `den` is zero.
  Rational(std::uint64_t num, std::uint64_t den);

  std::uint64_t num() const noexcept { return num_; }
  std::uint64_t den() const noexcept { return den_; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  /// Accepts "3/5", "0.6", "60%" or an integer. Decimal input is converted
  /// exactly ("0.6" is 3/5).
  static Rational parse(std::string_view text);

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept;

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace xmr
