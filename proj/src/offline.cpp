#include "edgecache/offline.hpp"

#include <limits>
#include <sstream>

namespace edgecache {

namespace {

struct Value {
  std::int64_t cost = 0;
  std::int64_t fetches = 0;
};

constexpr std::int64_t kUnreachable = std::numeric_limits<std::int64_t>::max() / 4;

// True when `a` should be taken over `b`; `b` is the uncached option, so
// full ties keep it.
bool strictly_better(const Value& a, const Value& b, TieBreak tie_break) {
  if (a.cost != b.cost) return a.cost < b.cost;
  return tie_break == TieBreak::kMostFetches && a.fetches > b.fetches;
}

std::int64_t slot_base(bool cached, Count x, const ScaledCosts& k) {
  return cached ? overflow(x, k.kappa) * k.unit_den + k.rent : x * k.unit_den;
}

}  // namespace

OptOffResult opt_off(const ArrivalTrace& trace, const CostParams& params, TieBreak tie_break) {
  const ScaledCosts k = params.scaled();
  const std::size_t horizon = trace.horizon();
  const auto& x = trace.counts();

  // value[t][s]: cheapest cost of slots t+1..T given r_{t+1} = s (0-based t).
  std::vector<std::array<Value, 2>> value(horizon + 1);
  std::vector<std::array<bool, 2>> go_cached(horizon);
  value[horizon][0] = {0, 0};
  value[horizon][1] = {kUnreachable, 0};
  bool ties = false;

  for (std::size_t i = horizon; i-- > 0;) {
    for (int s = 0; s < 2; ++s) {
      const Value& stay_out = value[i + 1][0];
      Value cached_next = value[i + 1][1];
      if (cached_next.cost < kUnreachable && s == 0) {
        cached_next.cost += k.fetch;
        cached_next.fetches += 1;
      }
      const bool take = cached_next.cost < kUnreachable && strictly_better(cached_next, stay_out, tie_break);
      if (cached_next.cost < kUnreachable && cached_next.cost == stay_out.cost) ties = true;
      const Value& chosen = take ? cached_next : stay_out;
      go_cached[i][s] = take;
      value[i][s] = {chosen.cost + slot_base(s == 1, x[i], k), chosen.fetches};
    }
  }

  Value start_cached = value[0][1];
  if (start_cached.cost < kUnreachable) {
    start_cached.cost += k.fetch;
    start_cached.fetches += 1;
  }
  const bool start = start_cached.cost < kUnreachable && strictly_better(start_cached, value[0][0], tie_break);
  if (start_cached.cost == value[0][0].cost) ties = true;

  OptOffResult result;
  result.ties = ties;
  result.cost = k.to_rational(start ? start_cached.cost : value[0][0].cost);
  result.schedule.cached.resize(horizon);
  bool state = start;
  for (std::size_t i = 0; i < horizon; ++i) {
    result.schedule.cached[i] = state;
    state = go_cached[i][state ? 1 : 0];
  }
  result.schedule.cached_after = horizon == 0 ? start : false;
  return result;
}

BruteForceResult brute_force_opt(const ArrivalTrace& trace, const CostParams& params) {
  const std::size_t horizon = trace.horizon();
  if (horizon > kBruteForceMaxHorizon) {
    throw HorizonTooLarge("brute force is limited to " + std::to_string(kBruteForceMaxHorizon) + " slots, got " +
                          std::to_string(horizon));
  }
  const ScaledCosts k = params.scaled();
  const auto& x = trace.counts();

  BruteForceResult out;
  std::int64_t best_cost = std::numeric_limits<std::int64_t>::max();
  std::uint32_t best_mask = 0;
  const std::uint32_t masks = std::uint32_t{1} << horizon;
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    std::int64_t cost = (mask & 1u) ? k.fetch : 0;
    for (std::size_t t = 0; t < horizon; ++t) {
      const bool now = (mask >> t) & 1u;
      if (now) {
        cost += k.rent + overflow(x[t], k.kappa) * k.unit_den;
      } else {
        cost += x[t] * k.unit_den;
        if (t + 1 < horizon && ((mask >> (t + 1)) & 1u)) cost += k.fetch;
      }
    }
    if (cost < best_cost) {
      best_cost = cost;
      best_mask = mask;
      out.optimal_count = 1;
    } else if (cost == best_cost) {
      ++out.optimal_count;
    }
  }

  out.best.cost = k.to_rational(best_cost);
  out.best.ties = out.optimal_count > 1;
  out.best.schedule.cached.resize(horizon);
  for (std::size_t t = 0; t < horizon; ++t) out.best.schedule.cached[t] = (best_mask >> t) & 1u;
  return out;
}

namespace {

bool cached_at(const Schedule& s, Slot t) {
  const auto horizon = static_cast<Slot>(s.horizon());
  if (t == horizon + 1) return s.cached_after;
  return s.at(t);
}

std::string frame_label(const Frame& f) {
  std::ostringstream os;
  os << "frame " << f.index << " [" << f.start << ", " << f.end << "]";
  return os.str();
}

}  // namespace

FrameDecomposition decompose_frames(const ArrivalTrace& trace, const Schedule& opt_schedule,
                                    const Schedule& rr_schedule, const CostParams& params) {
  const auto horizon = static_cast<Slot>(trace.horizon());
  const CostLedger opt_ledger = score(trace, opt_schedule, params, opt_schedule.starts_cached());
  const CostLedger rr_ledger = score(trace, rr_schedule, params, rr_schedule.starts_cached());
  if (rr_schedule.starts_cached()) {
    throw ContractViolation("frame decomposition expects an online schedule that starts uncached");
  }

  std::vector<Slot> opt_fetches;
  if (opt_schedule.starts_cached() && horizon > 0) opt_fetches.push_back(0);
  for (Slot t = 1; t < horizon; ++t) {
    if (!opt_schedule.at(t) && opt_schedule.at(t + 1)) opt_fetches.push_back(t);
  }

  FrameDecomposition out;
  const Rational gap_bound = 2 * params.fetch_cost() + params.kappa();
  const Rational last_gap_bound = params.fetch_cost() + params.kappa();

  auto slot_costs = [&](Slot first, Slot last, Frame& f) {
    for (Slot t = first; t <= last; ++t) {
      const auto i = static_cast<std::size_t>(t - 1);
      f.rr_cost += rr_ledger.per_slot[i].total();
      f.opt_cost += opt_ledger.per_slot[i].service + opt_ledger.per_slot[i].rent;
    }
  };

  const std::size_t frame_count = opt_fetches.size() + 1;
  for (std::size_t i = 0; i < frame_count; ++i) {
    Frame f;
    f.index = static_cast<int>(i);
    f.start = i == 0 ? 1 : opt_fetches[i - 1] + 1;
    f.end = i + 1 < frame_count ? opt_fetches[i] : horizon;
    if (i > 0) {
      f.opt_fetch_slot = opt_fetches[i - 1];
      f.opt_cost += params.fetch_cost();
    }
    for (Slot t = f.start; t <= f.end; ++t) {
      const bool rr_now = rr_schedule.at(t);
      const bool rr_next = cached_at(rr_schedule, t + 1);
      if (!rr_now && rr_next) f.rr_fetch_slots.push_back(t);
      if (rr_now && !rr_next) f.rr_evict_slots.push_back(t);
      if (t < horizon && opt_schedule.at(t) && !opt_schedule.at(t + 1)) f.opt_evict_slot = t;
    }
    slot_costs(f.start, f.end, f);

    auto fail = [&](const std::string& what) { out.violations.push_back(frame_label(f) + ": " + what); };

    if (i == 0) {
      if (!f.rr_fetch_slots.empty()) fail("RR fetches before the first offline fetch");
      if (f.rr_cost != f.opt_cost) fail("RR and offline costs differ before the first offline fetch");
      out.frames.push_back(std::move(f));
      continue;
    }
    if (f.start <= horizon && rr_schedule.at(f.start)) fail("RR is cached when the frame opens");
    const bool last = i + 1 == frame_count;

    if (f.opt_evict_slot) {
      const Slot tau = *f.opt_evict_slot;
      if (f.rr_fetch_slots.size() != 1) {
        fail("expected one RR fetch, found " + std::to_string(f.rr_fetch_slots.size()));
      } else if (f.rr_fetch_slots.front() > tau) {
        fail("RR fetch at slot " + std::to_string(f.rr_fetch_slots.front()) + " after offline eviction at " +
             std::to_string(tau));
      }
      const std::size_t evicts = f.rr_evict_slots.size();
      if (evicts > 1 || (!last && evicts != 1)) {
        fail("expected one RR eviction, found " + std::to_string(evicts));
      } else if (evicts == 1 && f.rr_evict_slots.front() <= tau) {
        fail("RR eviction at slot " + std::to_string(f.rr_evict_slots.front()) + " not after offline eviction at " +
             std::to_string(tau));
      }
      if (f.rr_fetch_slots.size() == 1) {
        const Slot tf = f.rr_fetch_slots.front();
        const Slot te = evicts == 1 ? f.rr_evict_slots.front() : f.end;
        f.sub = {SubFrame{f.start, tf}, SubFrame{tf + 1, tau}, SubFrame{tau + 1, te}, SubFrame{te + 1, f.end}};
      }
      if (f.rr_cost - f.opt_cost > gap_bound) {
        fail("cost gap " + to_exact_string(f.rr_cost - f.opt_cost) + " exceeds 2M + kappa");
      }
    } else {
      // Offline stays cached to the end of the horizon.
      if (f.rr_fetch_slots.size() != 1) fail("expected one RR fetch, found " + std::to_string(f.rr_fetch_slots.size()));
      if (!f.rr_evict_slots.empty()) fail("RR evicts while the offline schedule stays cached");
      if (f.rr_fetch_slots.size() == 1) {
        const Slot tf = f.rr_fetch_slots.front();
        f.sub = {SubFrame{f.start, tf}, SubFrame{tf + 1, f.end}, SubFrame{}, SubFrame{}};
      }
      if (f.rr_cost - f.opt_cost > last_gap_bound) {
        fail("cost gap " + to_exact_string(f.rr_cost - f.opt_cost) + " exceeds M + kappa");
      }
    }
    out.frames.push_back(std::move(f));
  }
  return out;
}

bool StructureReport::ok() const {
  for (const auto& iv : intervals) {
    if (!iv.ok()) return false;
  }
  return true;
}

std::vector<std::string> StructureReport::violations() const {
  std::vector<std::string> out;
  for (const auto& iv : intervals) {
    const std::string where = "cached interval [" + std::to_string(iv.first) + ", " + std::to_string(iv.last) + "]";
    if (!iv.long_enough) out.push_back(where + " is shorter than M / (kappa - c)");
    if (!iv.pays_for_itself) out.push_back(where + " serves fewer than M + length * c requests at the edge");
  }
  return out;
}

StructureReport verify_opt_structure(const ArrivalTrace& trace, const Schedule& opt_schedule, const CostParams& params) {
  if (opt_schedule.horizon() != trace.horizon()) throw ScheduleMismatch("schedule and trace lengths differ");
  StructureReport report;
  const auto horizon = static_cast<Slot>(trace.horizon());
  const Rational& fetch = params.fetch_cost();
  const Rational& rent = params.rent_cost();
  Slot t = 1;
  while (t <= horizon) {
    if (!opt_schedule.at(t)) {
      ++t;
      continue;
    }
    CachedInterval iv;
    iv.first = t;
    Count served = 0;
    while (t <= horizon && opt_schedule.at(t)) {
      served += served_at_edge(trace.at(t), params.kappa());
      ++t;
    }
    iv.last = t - 1;
    const std::int64_t length = iv.last - iv.first + 1;
    iv.long_enough = Rational(length) * (params.kappa() - rent) >= fetch;
    iv.pays_for_itself = Rational(served) >= fetch + Rational(length) * rent;
    report.intervals.push_back(iv);
  }
  return report;
}

}  // namespace edgecache
