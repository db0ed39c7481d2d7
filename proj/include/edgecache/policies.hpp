#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "edgecache/core.hpp"

namespace edgecache {

// Every online policy observes x_t at the end of slot t and emits r_{t+1}.
// Online policies start uncached (r_1 = 0); the always-cache baseline is
// the one exception and pays a pre-horizon fetch.

// RetroRenting, literal window scan. While uncached it fetches at the end
// of slot t if some tau in (t_evict, t] has
//   sum_{l=tau..t} min(x_l, kappa) >= (t - tau + 1) c + M,
// and while cached it evicts if some tau in (t_fetch, t] has
//   sum_{l=tau..t} min(x_l, kappa) + M <= (t - tau + 1) c.
// Per-step work and memory grow with the distance to the last switch.
struct RrState {
  ScaledCosts costs;
  bool cached = false;
  Slot t = 0;
  Slot t_fetch = 0;
  Slot t_evict = 0;
  // prefix[k] = sum of min(x, kappa) over the first k slots after the anchor
  std::vector<Count> prefix{0};
  // tau that triggered the most recent switch
  Slot last_witness = 0;
};

RrState rr_init(const CostParams& params);
bool rr_step(RrState& state, Count arrivals);

// RetroRenting through the clipped potential
//   delta(t) = min{M, max{0, delta(t-1) + min(x_t, kappa) - c}},
// fetching when it reaches M and evicting when it reaches 0.
struct ErrState {
  ScaledCosts costs;
  bool cached = false;
  std::int64_t delta_units = 0;

  Rational delta() const { return costs.to_rational(delta_units); }
};

ErrState err_init(const CostParams& params);
bool err_step(ErrState& state, Count arrivals);

enum class TtlHold {
  // Cached in slot t iff a request arrived in slots [t-L, t-1].
  kLSlots,
  // Timer checked before it is decremented, so an isolated request keeps
  // the service for L+1 slots.
  kPseudocode,
};

struct TtlState {
  Slot ttl = 1;
  TtlHold hold = TtlHold::kLSlots;
  Slot timer = 0;
  bool cached = false;
};

TtlState ttl_init(Slot ttl, TtlHold hold = TtlHold::kLSlots);
bool ttl_step(TtlState& state, Count arrivals);

struct StaticState {
  bool always = false;
};

enum class PolicyKind { kRetroRenting, kEfficientRetroRenting, kTtl, kTtlPseudocode, kAlwaysCache, kNeverCache };

struct PolicySpec {
  PolicyKind kind = PolicyKind::kEfficientRetroRenting;
  Slot ttl = 0;

  // rr | err | ttl(L) | ttl-alg(L) | always | never
  static PolicySpec parse(std::string_view text);
  std::string name() const;

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

class Policy {
 public:
  using State = std::variant<RrState, ErrState, TtlState, StaticState>;

  Policy(const PolicySpec& spec, const CostParams& params);

  // r_t for the next slot to be processed.
  bool cached() const;
  // Consumes x_t, returns r_{t+1}.
  bool step(Count arrivals);

  const PolicySpec& spec() const { return spec_; }
  std::string name() const { return spec_.name(); }
  const State& state() const { return state_; }

 private:
  PolicySpec spec_;
  State state_;
};

// Runs a fresh copy of the policy over the trace.
Schedule run_policy(Policy policy, const ArrivalTrace& trace);
Schedule run_policy(const PolicySpec& spec, const CostParams& params, const ArrivalTrace& trace);

CostLedger simulate(const PolicySpec& spec, const CostParams& params, const ArrivalTrace& trace);

}  // namespace edgecache
