#include "superbider/scalar.hpp"

#include <cctype>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace superbider {
namespace {

using Wide = __int128;

Wide wide_abs(Wide v) { return v < 0 ? -v : v; }

Wide wide_gcd(Wide a, Wide b) {
  a = wide_abs(a);
  b = wide_abs(b);
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits64(Wide v) {
  return v >= std::numeric_limits<int64_t>::min() && v <= std::numeric_limits<int64_t>::max();
}

mpq_class mpq_from_small(int64_t num, int64_t den) {
  mpz_class n;
  mpz_class d;
  mpz_set_si(n.get_mpz_t(), num);
  mpz_set_si(d.get_mpz_t(), den);
  return mpq_class(n, d);
}

bool mpz_fits_int64(const mpz_class& v) {
  static const mpz_class lo = [] {
    mpz_class r;
    mpz_set_si(r.get_mpz_t(), std::numeric_limits<int64_t>::min());
    return r;
  }();
  static const mpz_class hi = [] {
    mpz_class r;
    mpz_set_si(r.get_mpz_t(), std::numeric_limits<int64_t>::max());
    return r;
  }();
  return v >= lo && v <= hi;
}

}  // namespace

Scalar::Scalar(int64_t num, int64_t den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  *this = from_wide(num, den);
}

Scalar::Scalar(const mpq_class& value) { *this = from_mpq(value); }

Scalar Scalar::from_wide(Wide num, Wide den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  Scalar out;
  if (fits64(num) && fits64(den)) {
    out.num_ = static_cast<int64_t>(num);
    out.den_ = static_cast<int64_t>(den);
    return out;
  }
  // Promote: build the mpq from 64-bit halves.
  auto to_mpz = [](Wide v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    mpz_class hi;
    mpz_class lo;
    mpz_set_ui(hi.get_mpz_t(), static_cast<unsigned long>(u >> 64));
    mpz_set_ui(lo.get_mpz_t(), static_cast<unsigned long>(u & ~static_cast<uint64_t>(0)));
    mpz_class r = (hi << 64) + lo;
    return neg ? mpz_class(-r) : r;
  };
  mpq_class q(to_mpz(num), to_mpz(den));
  q.canonicalize();
  return from_mpq(std::move(q));
}

Scalar Scalar::from_mpq(mpq_class value) {
  value.canonicalize();
  Scalar out;
  if (mpz_fits_int64(value.get_num()) && mpz_fits_int64(value.get_den())) {
    out.num_ = mpz_get_si(value.get_num_mpz_t());
    out.den_ = mpz_get_si(value.get_den_mpz_t());
    return out;
  }
  out.big_ = std::make_shared<const mpq_class>(std::move(value));
  return out;
}

bool Scalar::is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }

int Scalar::sign() const {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

mpq_class Scalar::to_mpq() const { return big_ ? *big_ : mpq_from_small(num_, den_); }

std::string Scalar::str() const {
  if (big_) return big_->get_str();
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Scalar Scalar::operator-() const {
  if (big_) return from_mpq(-*big_);
  return from_wide(-static_cast<Wide>(num_), den_);
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
  if (!big_ && !rhs.big_) {
    if (den_ == rhs.den_) {
      *this = from_wide(static_cast<Wide>(num_) + rhs.num_, den_);
    } else {
      *this = from_wide(static_cast<Wide>(num_) * rhs.den_ + static_cast<Wide>(rhs.num_) * den_,
                        static_cast<Wide>(den_) * rhs.den_);
    }
    return *this;
  }
  *this = from_mpq(to_mpq() + rhs.to_mpq());
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) { return *this += -rhs; }

Scalar& Scalar::operator*=(const Scalar& rhs) {
  if (!big_ && !rhs.big_) {
    *this = from_wide(static_cast<Wide>(num_) * rhs.num_, static_cast<Wide>(den_) * rhs.den_);
    return *this;
  }
  *this = from_mpq(to_mpq() * rhs.to_mpq());
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs) {
  if (rhs.is_zero()) throw std::domain_error("division by zero rational");
  if (!big_ && !rhs.big_) {
    *this = from_wide(static_cast<Wide>(num_) * rhs.den_, static_cast<Wide>(den_) * rhs.num_);
    return *this;
  }
  *this = from_mpq(to_mpq() / rhs.to_mpq());
  return *this;
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // canonical: a small-fitting value is never stored big
}

bool operator<(const Scalar& a, const Scalar& b) {
  if (!a.big_ && !b.big_) {
    return static_cast<Wide>(a.num_) * b.den_ < static_cast<Wide>(b.num_) * a.den_;
  }
  return a.to_mpq() < b.to_mpq();
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

Scalar parse_rational(std::string_view text) {
  auto fail = [&] {
    throw std::invalid_argument("invalid rational literal '" + std::string(text) +
                                "' (expected p or p/q)");
  };
  auto parse_int = [&](std::string_view s, bool allow_sign) {
    if (s.empty()) fail();
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) fail();
    for (std::size_t j = i; j < s.size(); ++j) {
      if (!std::isdigit(static_cast<unsigned char>(s[j]))) fail();
    }
    mpz_class v(std::string(s[0] == '+' ? s.substr(1) : s), 10);
    return v;
  };
  auto slash = text.find('/');
  mpz_class num = parse_int(text.substr(0, slash), true);
  mpz_class den = 1;
  if (slash != std::string_view::npos) {
    den = parse_int(text.substr(slash + 1), false);
    if (den == 0) fail();
  }
  return Scalar(mpq_class(num, den));
}

}  // namespace superbider
