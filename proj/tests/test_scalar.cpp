#include <random>

#include "doctest.h"
#include "superbider/halfint.hpp"
#include "superbider/scalar.hpp"

using superbider::HalfInt;
using superbider::Scalar;

TEST_CASE("scalar arithmetic agrees with mpq") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int64_t> small(-50, 50);
  std::uniform_int_distribution<int64_t> huge(INT64_MIN / 2, INT64_MAX / 2);
  for (int i = 0; i < 2000; ++i) {
    auto pick = [&]() -> std::pair<int64_t, int64_t> {
      int64_t n = (i % 3 == 0) ? huge(rng) : small(rng);
      int64_t d = (i % 5 == 0) ? huge(rng) : small(rng);
      if (d == 0) d = 1;
      return {n, d};
    };
    auto [an, ad] = pick();
    auto [bn, bd] = pick();
    Scalar a(an, ad), b(bn, bd);
    mpq_class qa(mpz_class(std::to_string(an)), mpz_class(std::to_string(ad)));
    mpq_class qb(mpz_class(std::to_string(bn)), mpz_class(std::to_string(bd)));
    qa.canonicalize();
    qb.canonicalize();
    CHECK((a + b).to_mpq() == qa + qb);
    CHECK((a - b).to_mpq() == qa - qb);
    CHECK((a * b).to_mpq() == qa * qb);
    if (qb != 0) CHECK((a / b).to_mpq() == qa / qb);
    CHECK((a == b) == (qa == qb));
    CHECK((a < b) == (qa < qb));
  }
}

TEST_CASE("scalar keeps canonical form across promotion") {
  Scalar big(INT64_MAX);
  Scalar x = big * big;
  CHECK_FALSE(x.fits_small());
  Scalar back = x / big;
  CHECK(back.fits_small());
  CHECK(back == big);
  CHECK(Scalar(2, 4) == Scalar(1, 2));
  CHECK(Scalar(3, -6).str() == "-1/2");
  CHECK((Scalar(1, 3) + Scalar(2, 3)).is_one());
}

TEST_CASE("rational parsing") {
  CHECK(superbider::parse_rational("3/2") == Scalar(3, 2));
  CHECK(superbider::parse_rational("-1") == Scalar(-1));
  CHECK(superbider::parse_rational("+4/6") == Scalar(2, 3));
  CHECK_THROWS_AS(superbider::parse_rational("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(superbider::parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(superbider::parse_rational("1e3"), std::invalid_argument);
  CHECK_THROWS_AS(superbider::parse_rational(""), std::invalid_argument);
}

TEST_CASE("half integers") {
  HalfInt h = superbider::parse_halfint("11/2");
  CHECK(h.twice() == 11);
  CHECK_FALSE(h.is_integer());
  CHECK(h.str() == "11/2");
  CHECK(superbider::parse_halfint("-3").str() == "-3");
  CHECK(HalfInt::from_twice(-3).floor() == -2);
  CHECK((h + HalfInt::from_twice(1)).as_int() == 6);
  CHECK_THROWS_AS(superbider::parse_halfint("1/3"), std::invalid_argument);
}
