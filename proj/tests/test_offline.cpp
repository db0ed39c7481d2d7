#include <doctest.h>

#include <algorithm>

#include "edgecache/offline.hpp"
#include "edgecache/policies.hpp"

using namespace edgecache;

namespace {
const CostParams kSmall(Rational(2), Rational(1, 2), 1);
}

TEST_CASE("opt_off: steady traffic is cached throughout") {
  const OptOffResult r = opt_off(ArrivalTrace({1, 1, 1, 1, 1}), kSmall);
  CHECK(r.cost == Rational(9, 2));
  CHECK(std::count(r.schedule.cached.begin(), r.schedule.cached.end(), true) == 5);
  CHECK(brute_force_opt(ArrivalTrace({1, 1, 1, 1, 1}), kSmall).best.cost == Rational(9, 2));
}

TEST_CASE("opt_off: silence and a lone burst") {
  const OptOffResult idle = opt_off(ArrivalTrace(std::vector<Count>(8, 0)), kSmall);
  CHECK(idle.cost == Rational(0));
  for (const bool b : idle.schedule.cached) CHECK_FALSE(b);
  const CostParams p(Rational(5), Rational(1), 3);  // M + c > kappa
  const OptOffResult burst = opt_off(ArrivalTrace({3, 0, 0, 0}), p);
  CHECK(burst.cost == Rational(3));
  CHECK_FALSE(burst.schedule.starts_cached());
}

TEST_CASE("opt_off: tie-breaks agree on cost") {
  // Forwarding costs 4, caching costs M + 4c = 4: a genuine tie.
  const ArrivalTrace x({1, 1, 1, 1});
  const OptOffResult lazy = opt_off(x, kSmall, TieBreak::kPreferUncached);
  const OptOffResult eager = opt_off(x, kSmall, TieBreak::kMostFetches);
  CHECK(lazy.cost == Rational(4));
  CHECK(eager.cost == Rational(4));
  CHECK(lazy.ties);
  CHECK_FALSE(lazy.schedule.starts_cached());
  CHECK(eager.schedule.starts_cached());
}

TEST_CASE("brute force: tiny cases and guard") {
  CHECK(brute_force_opt(ArrivalTrace(), kSmall).best.cost == Rational(0));
  CHECK(brute_force_opt(ArrivalTrace({1}), kSmall).best.cost == Rational(1));
  CHECK_THROWS_AS(brute_force_opt(ArrivalTrace(std::vector<Count>(21, 1)), kSmall), HorizonTooLarge);
}

TEST_CASE("frames: no offline fetch means one quiet frame") {
  const ArrivalTrace x({1, 0, 0, 1, 0});
  const OptOffResult opt = opt_off(x, kSmall, TieBreak::kMostFetches);
  const Schedule rr = run_policy(PolicySpec::parse("rr"), kSmall, x);
  const FrameDecomposition d = decompose_frames(x, opt.schedule, rr, kSmall);
  CHECK(d.ok());
  REQUIRE(d.frames.size() == 1);
  CHECK(d.frames[0].rr_fetch_slots.empty());
}

TEST_CASE("frames: one interior frame with sub-frames") {
  const ArrivalTrace x({0, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0});
  const OptOffResult opt = opt_off(x, kSmall, TieBreak::kMostFetches);
  const Schedule rr = run_policy(PolicySpec::parse("rr"), kSmall, x);
  const FrameDecomposition d = decompose_frames(x, opt.schedule, rr, kSmall);
  CHECK(d.ok());
  REQUIRE(d.frames.size() == 2);
  const Frame& f = d.frames[1];
  CHECK(f.opt_fetch_slot == std::optional<Slot>(1));
  CHECK(f.opt_evict_slot == std::optional<Slot>(7));
  CHECK(f.rr_fetch_slots == std::vector<Slot>{5});
  CHECK(f.rr_evict_slots == std::vector<Slot>{11});
  CHECK(f.rr_cost - f.opt_cost <= Rational(2) * kSmall.fetch_cost() + kSmall.kappa());
}

TEST_CASE("frames: a bad online schedule is reported") {
  const ArrivalTrace x({1, 1, 1, 1, 1, 1});
  const OptOffResult opt = opt_off(x, kSmall, TieBreak::kMostFetches);
  Schedule never;
  never.cached.assign(6, false);
  const FrameDecomposition d = decompose_frames(x, opt.schedule, never, kSmall);
  CHECK_FALSE(d.ok());
}

TEST_CASE("structure: cached intervals pay for themselves") {
  const ArrivalTrace x({1, 1, 1, 1, 1});
  const StructureReport r = verify_opt_structure(x, opt_off(x, kSmall), kSmall);
  REQUIRE(r.intervals.size() == 1);
  CHECK(r.intervals[0].first == 1);
  CHECK(r.intervals[0].last == 5);
  CHECK(r.ok());
  Schedule empty;
  empty.cached.assign(5, false);
  CHECK(verify_opt_structure(x, empty, kSmall).ok());
  Schedule short_stay;
  short_stay.cached = {true, false, false, false, false};
  CHECK_FALSE(verify_opt_structure(x, short_stay, kSmall).ok());
}
