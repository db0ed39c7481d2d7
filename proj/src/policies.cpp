#include "edgecache/policies.hpp"

#include <charconv>
#include <stdexcept>

namespace edgecache {

RrState rr_init(const CostParams& params) {
  RrState s;
  s.costs = params.scaled();
  return s;
}

bool rr_step(RrState& s, Count arrivals) {
  const ScaledCosts& k = s.costs;
  ++s.t;
  s.prefix.push_back(s.prefix.back() + served_at_edge(arrivals, k.kappa));

  const Slot anchor = s.cached ? s.t_fetch : s.t_evict;
  const auto top = static_cast<std::size_t>(s.t - anchor);
  for (Slot tau = anchor + 1; tau <= s.t; ++tau) {
    const std::int64_t len = s.t - tau + 1;
    const std::int64_t served = (s.prefix[top] - s.prefix[static_cast<std::size_t>(tau - anchor - 1)]) * k.unit_den;
    const bool hit = s.cached ? served + k.fetch <= len * k.rent : served >= len * k.rent + k.fetch;
    if (!hit) continue;
    s.last_witness = tau;
    if (s.cached) {
      s.cached = false;
      s.t_evict = s.t;
    } else {
      s.cached = true;
      s.t_fetch = s.t;
    }
    s.prefix.assign(1, 0);
    break;
  }
  return s.cached;
}

ErrState err_init(const CostParams& params) {
  ErrState s;
  s.costs = params.scaled();
  return s;
}

bool err_step(ErrState& s, Count arrivals) {
  const ScaledCosts& k = s.costs;
  std::int64_t next = s.delta_units + served_at_edge(arrivals, k.kappa) * k.unit_den - k.rent;
  if (next < 0) next = 0;
  if (next > k.fetch) next = k.fetch;
  s.delta_units = next;
  if (next == k.fetch) {
    s.cached = true;
  } else if (next == 0) {
    s.cached = false;
  }
  return s.cached;
}

TtlState ttl_init(Slot ttl, TtlHold hold) {
  if (ttl < 1) throw std::invalid_argument("TTL value must be at least one slot");
  TtlState s;
  s.ttl = ttl;
  s.hold = hold;
  return s;
}

bool ttl_step(TtlState& s, Count arrivals) {
  if (arrivals > 0) {
    s.timer = s.ttl;
    s.cached = true;
    return true;
  }
  switch (s.hold) {
    case TtlHold::kLSlots:
      if (s.timer > 0) --s.timer;
      s.cached = s.timer > 0;
      break;
    case TtlHold::kPseudocode:
      if (s.timer == 0) {
        s.cached = false;
      } else {
        s.cached = true;
        --s.timer;
      }
      break;
  }
  return s.cached;
}

namespace {

Slot parse_ttl_argument(std::string_view text, std::string_view whole) {
  Slot value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || value < 1) {
    throw std::invalid_argument("bad TTL value in policy '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

PolicySpec PolicySpec::parse(std::string_view text) {
  if (text == "rr") return {PolicyKind::kRetroRenting, 0};
  if (text == "err") return {PolicyKind::kEfficientRetroRenting, 0};
  if (text == "always") return {PolicyKind::kAlwaysCache, 0};
  if (text == "never") return {PolicyKind::kNeverCache, 0};
  for (const auto& [prefix, kind] : {std::pair{std::string_view("ttl-alg("), PolicyKind::kTtlPseudocode},
                                     std::pair{std::string_view("ttl("), PolicyKind::kTtl}}) {
    if (text.starts_with(prefix) && text.ends_with(")")) {
      const auto arg = text.substr(prefix.size(), text.size() - prefix.size() - 1);
      return {kind, parse_ttl_argument(arg, text)};
    }
  }
  throw std::invalid_argument("unknown policy '" + std::string(text) +
                              "' (expected rr, err, ttl(L), ttl-alg(L), always or never)");
}

std::string PolicySpec::name() const {
  switch (kind) {
    case PolicyKind::kRetroRenting: return "rr";
    case PolicyKind::kEfficientRetroRenting: return "err";
    case PolicyKind::kTtl: return "ttl(" + std::to_string(ttl) + ")";
    case PolicyKind::kTtlPseudocode: return "ttl-alg(" + std::to_string(ttl) + ")";
    case PolicyKind::kAlwaysCache: return "always";
    case PolicyKind::kNeverCache: return "never";
  }
  return "?";
}

namespace {

Policy::State make_state(const PolicySpec& spec, const CostParams& params) {
  switch (spec.kind) {
    case PolicyKind::kRetroRenting: return rr_init(params);
    case PolicyKind::kEfficientRetroRenting: return err_init(params);
    case PolicyKind::kTtl: return ttl_init(spec.ttl, TtlHold::kLSlots);
    case PolicyKind::kTtlPseudocode: return ttl_init(spec.ttl, TtlHold::kPseudocode);
    case PolicyKind::kAlwaysCache: return StaticState{true};
    case PolicyKind::kNeverCache: return StaticState{false};
  }
  throw std::logic_error("unhandled policy kind");
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

Policy::Policy(const PolicySpec& spec, const CostParams& params) : spec_(spec), state_(make_state(spec, params)) {}

bool Policy::cached() const {
  return std::visit(Overloaded{[](const StaticState& s) { return s.always; },
                               [](const auto& s) { return s.cached; }},
                    state_);
}

bool Policy::step(Count arrivals) {
  return std::visit(Overloaded{[&](RrState& s) { return rr_step(s, arrivals); },
                               [&](ErrState& s) { return err_step(s, arrivals); },
                               [&](TtlState& s) { return ttl_step(s, arrivals); },
                               [](StaticState& s) { return s.always; }},
                    state_);
}

Schedule run_policy(Policy policy, const ArrivalTrace& trace) {
  Schedule schedule;
  schedule.cached.reserve(trace.horizon());
  for (const Count x : trace.counts()) {
    schedule.cached.push_back(policy.cached());
    policy.step(x);
  }
  schedule.cached_after = policy.cached();
  return schedule;
}

Schedule run_policy(const PolicySpec& spec, const CostParams& params, const ArrivalTrace& trace) {
  return run_policy(Policy(spec, params), trace);
}

CostLedger simulate(const PolicySpec& spec, const CostParams& params, const ArrivalTrace& trace) {
  const Schedule schedule = run_policy(spec, params, trace);
  return score(trace, schedule, params, schedule.starts_cached());
}

}  // namespace edgecache
