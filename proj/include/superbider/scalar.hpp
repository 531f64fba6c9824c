#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace superbider {

/// Exact rational number.
///
/// Values whose reduced numerator and denominator fit in 64 bits are kept
/// inline; anything larger is promoted to a shared, immutable GMP rational.
/// Both representations are always reduced with a positive denominator, and a
/// value that fits inline is never stored big, so equality can compare the
/// representations directly.
class Scalar {
 public:
  Scalar() = default;
  Scalar(int64_t value) : num_(value) {}  // NOLINT(google-explicit-constructor)
  Scalar(int64_t num, int64_t den);
  explicit Scalar(const mpq_class& value);

  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_one() const { return !big_ && num_ == 1 && den_ == 1; }
  bool is_integer() const;
  int sign() const;

  /// Numerator/denominator, valid only when fits_small().
  bool fits_small() const { return !big_; }
  int64_t small_num() const { return num_; }
  int64_t small_den() const { return den_; }

  mpq_class to_mpq() const;
  std::string str() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& rhs);
  Scalar& operator-=(const Scalar& rhs);
  Scalar& operator*=(const Scalar& rhs);
  Scalar& operator/=(const Scalar& rhs);

  friend Scalar operator+(Scalar lhs, const Scalar& rhs) { return lhs += rhs; }
  friend Scalar operator-(Scalar lhs, const Scalar& rhs) { return lhs -= rhs; }
  friend Scalar operator*(Scalar lhs, const Scalar& rhs) { return lhs *= rhs; }
  friend Scalar operator/(Scalar lhs, const Scalar& rhs) { return lhs /= rhs; }

  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
  friend bool operator<(const Scalar& a, const Scalar& b);

 private:
  static Scalar from_mpq(mpq_class value);
  static Scalar from_wide(__int128 num, __int128 den);

  int64_t num_ = 0;
  int64_t den_ = 1;
  std::shared_ptr<const mpq_class> big_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

/// Parses `p`, `-p`, `+p` or `p/q` with decimal integers. Anything else
/// (decimal points, exponents, zero denominators) throws std::invalid_argument.
Scalar parse_rational(std::string_view text);

}  // namespace superbider
