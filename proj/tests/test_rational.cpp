#include "doctest.h"
#include "qv/rational.hpp"

using namespace qv;

TEST_CASE("floor and ceil handle negatives") {
  CHECK(rat_floor(Rat(7, 2)) == 3);
  CHECK(rat_ceil(Rat(7, 2)) == 4);
  CHECK(rat_floor(Rat(-7, 2)) == -4);
  CHECK(rat_ceil(Rat(-7, 2)) == -3);
  CHECK(rat_floor(Rat(6)) == 6);
  CHECK(rat_ceil(Rat(-6)) == -6);
}

TEST_CASE("round half up") {
  CHECK(rat_round_half_up(Rat(1, 2)) == 1);
  CHECK(rat_round_half_up(Rat(-1, 2)) == 0);
  CHECK(rat_round_half_up(Rat(5, 3)) == 2);
  CHECK(rat_round_half_up(Rat(4, 3)) == 1);
}

TEST_CASE("string round trips") {
  CHECK(rat_to_string(Rat(1, 2)) == "1/2");
  CHECK(rat_to_string(Rat(-3, 4)) == "-3/4");
  CHECK(rat_to_string(Rat(0)) == "0");
  CHECK(rat_to_string(Rat(97, 2)) == "97/2");

  CHECK(*rat_from_string("1/2") == Rat(1, 2));
  CHECK(*rat_from_string("-3/4") == Rat(-3, 4));
  CHECK(*rat_from_string("42") == Rat(42));
  CHECK(*rat_from_string("6/4") == Rat(3, 2));
  CHECK(!rat_from_string("1/0"));
  CHECK(!rat_from_string(""));
  CHECK(!rat_from_string("a/b"));
  CHECK(!rat_from_string("1/"));
}

TEST_CASE("extended rationals order with sentinels") {
  const ExtRat lo = ExtRat::neg_inf();
  const ExtRat hi = ExtRat::pos_inf();
  const ExtRat mid{Rat(3, 2)};
  CHECK(lo < mid);
  CHECK(mid < hi);
  CHECK(lo < hi);
  CHECK(!(hi < hi));
  CHECK(!(lo < lo));
  CHECK(min(mid, hi) == mid);
  CHECK(max(lo, mid) == mid);
  CHECK((hi - 1) == hi);
  CHECK((ExtRat{Rat(5)} - 1) == ExtRat{Rat(4)});
}
