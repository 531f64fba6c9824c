#include "doctest.h"
#include "recurrence_oracle.hpp"

TEST_CASE("engine matches the hand-coded recurrence system") {
  for (int b : {0, 1, 2, -1}) {
    CAPTURE(b);
    auto cmp = oracle::compare_with_engine(b, 3, 1);
    CHECK(cmp.central_zero);
    CHECK(cmp.engine_dimension == cmp.oracle_dimension);
    CHECK(cmp.same_span);
  }
}

TEST_CASE("recurrence oracle sees the expected families on a wider window") {
  // b=0 and b=1 keep one solution per shift, other b have none
  for (int b : {0, 1, 2, -1}) {
    auto cmp = oracle::compare_with_engine(b, 4, 1);
    CHECK(cmp.same_span);
    CHECK(cmp.oracle_dimension == (b == 0 || b == 1 ? 3u : 0u));
  }
}
