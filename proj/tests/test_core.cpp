#include <doctest.h>

#include "edgecache/core.hpp"

using namespace edgecache;

namespace {

Schedule sched(std::initializer_list<int> bits, bool after = false) {
  Schedule s;
  for (int b : bits) s.cached.push_back(b != 0);
  s.cached_after = after;
  return s;
}

const CostParams kSmall(Rational(2), Rational(1, 2), 1);

}  // namespace

TEST_CASE("params are validated") {
  CHECK_THROWS_AS(CostParams(Rational(1), Rational(0), 1), InvalidParams);
  CHECK_THROWS_AS(CostParams(Rational(2), Rational(-1, 2), 1), InvalidParams);
  CHECK_THROWS_AS(CostParams(Rational(2), Rational(1), 1), InvalidParams);
  CHECK_THROWS_AS(CostParams(Rational(2), Rational(0), 0), InvalidParams);
  CHECK_NOTHROW(CostParams(Rational(3, 2), Rational(0), 1));
}

TEST_CASE("scaled units share one denominator") {
  const CostParams p(Rational(7, 3), Rational(1, 4), 2);
  const ScaledCosts k = p.scaled();
  CHECK(k.unit_den == 12);
  CHECK(k.fetch == 28);
  CHECK(k.rent == 3);
  CHECK(k.to_rational(28) == Rational(7, 3));
}

TEST_CASE("score: empty and idle horizons") {
  CHECK(score(ArrivalTrace(), Schedule{}, kSmall, false).totals.total == Rational(0));
  CHECK(score(ArrivalTrace({0, 0, 0}), sched({0, 0, 0}), kSmall, false).totals.total == Rational(0));
}

TEST_CASE("score: cached from the start pays M up front") {
  const CostLedger l = score(ArrivalTrace({1, 1, 1, 1, 1}), sched({1, 1, 1, 1, 1}), kSmall, true);
  CHECK(l.totals.total == Rational(9, 2));
  CHECK(l.totals.service == Rational(0));
  CHECK(l.setup_fetch == Rational(2));
  CHECK(l.num_fetches == 1);
}

TEST_CASE("score: late fetch is charged in the slot before caching") {
  const CostLedger l = score(ArrivalTrace({1, 1, 1, 1, 1}), sched({0, 0, 0, 0, 1}), kSmall, false);
  CHECK(l.totals.service == Rational(4));
  CHECK(l.totals.fetch == Rational(2));
  CHECK(l.totals.rent == Rational(1, 2));
  CHECK(l.totals.total == Rational(13, 2));
  CHECK(l.per_slot[3].fetch == Rational(2));
  CHECK(l.per_slot[4].fetch == Rational(0));
}

TEST_CASE("score: fetch decided after the last slot lands in slot T") {
  const CostLedger l = score(ArrivalTrace({1, 1}), sched({0, 0}, true), kSmall, false);
  CHECK(l.per_slot[1].fetch == Rational(2));
  CHECK(l.totals.total == Rational(4));
}

TEST_CASE("score: overflow above kappa is forwarded") {
  const CostParams p(Rational(3), Rational(1), 2);
  const CostLedger l = score(ArrivalTrace({5, 1}), sched({1, 1}), p, true);
  CHECK(l.per_slot[0].service == Rational(3));
  CHECK(l.per_slot[1].service == Rational(0));
  CHECK(l.totals.total == Rational(3 + 3 + 2));
}

TEST_CASE("score: contract errors") {
  CHECK_THROWS_AS(score(ArrivalTrace({1, 1}), sched({0}), kSmall, false), ScheduleMismatch);
  CHECK_THROWS_AS(score(ArrivalTrace({1}), sched({1}), kSmall, false), ContractViolation);
}

TEST_CASE("empirical competitive ratio") {
  CHECK(competitive_ratio_empirical(Rational(13, 2), Rational(9, 2)).value == Rational(13, 9));
  CHECK(competitive_ratio_empirical(Rational(0), Rational(0)).value == Rational(1));
  CHECK(competitive_ratio_empirical(Rational(9, 2), Rational(9, 2)).value == Rational(1));
  CHECK(competitive_ratio_empirical(Rational(1), Rational(0)).infinite);
}

TEST_CASE("arrival stats validation") {
  CHECK_NOTHROW(validate(ArrivalStats{0.4, 0.4, 0.6}, 1));
  CHECK_THROWS(validate(ArrivalStats{0.4, 0.5, 0.6}, 1));
  CHECK_THROWS(validate(ExactArrivalStats{Rational(3), Rational(2), Rational(1, 2)}, 1));
  CHECK_NOTHROW(validate(ExactArrivalStats{Rational(3), Rational(1), Rational(1, 2)}, 1));
}
