#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "superbider/scalar.hpp"

namespace superbider {

/// An element of (1/2)Z, stored as its double.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  constexpr HalfInt(int64_t value) : twice_(2 * value) {}  // NOLINT(google-explicit-constructor)

  static constexpr HalfInt from_twice(int64_t twice) {
    HalfInt h;
    h.twice_ = twice;
    return h;
  }

  constexpr int64_t twice() const { return twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  /// Only meaningful when is_integer().
  constexpr int64_t as_int() const { return twice_ / 2; }
  /// Largest integer not above the value.
  constexpr int64_t floor() const { return twice_ >= 0 ? twice_ / 2 : -((-twice_ + 1) / 2); }

  constexpr HalfInt abs() const { return from_twice(twice_ < 0 ? -twice_ : twice_); }
  Scalar to_scalar() const { return Scalar(twice_, 2); }
  std::string str() const;

  constexpr HalfInt operator-() const { return from_twice(-twice_); }
  constexpr HalfInt& operator+=(HalfInt o) {
    twice_ += o.twice_;
    return *this;
  }
  constexpr HalfInt& operator-=(HalfInt o) {
    twice_ -= o.twice_;
    return *this;
  }
  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return a += b; }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return a -= b; }
  friend constexpr auto operator<=>(HalfInt a, HalfInt b) = default;

 private:
  int64_t twice_ = 0;
};

/// Accepts an integer literal or `p/2` (and `p/1`); other fractions throw.
HalfInt parse_halfint(std::string_view text);

}  // namespace superbider
