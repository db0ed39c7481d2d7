#include "edgecache/core.hpp"

#include <numeric>
#include <sstream>

namespace edgecache {

CostParams::CostParams(Rational fetch_cost, Rational rent_cost, Count kappa)
    : fetch_(fetch_cost), rent_(rent_cost), kappa_(kappa) {
  if (kappa_ < 1) throw InvalidParams("kappa must be a positive integer");
  if (fetch_ <= 1) throw InvalidParams("fetch cost M must exceed 1, got " + to_exact_string(fetch_));
  if (rent_ < 0) throw InvalidParams("rent cost c must be non-negative");
  if (rent_ >= kappa_) {
    throw InvalidParams("rent cost c must be below kappa (forwarding everything is optimal otherwise)");
  }
}

ScaledCosts CostParams::scaled() const {
  ScaledCosts s;
  s.unit_den = std::lcm(fetch_.denominator(), rent_.denominator());
  s.fetch = fetch_.numerator() * (s.unit_den / fetch_.denominator());
  s.rent = rent_.numerator() * (s.unit_den / rent_.denominator());
  s.kappa = kappa_;
  return s;
}

std::string CostParams::describe() const {
  std::ostringstream os;
  os << "M=" << to_exact_string(fetch_) << " c=" << to_exact_string(rent_) << " kappa=" << kappa_;
  return os.str();
}

ArrivalTrace::ArrivalTrace(std::vector<Count> counts) : counts_(std::move(counts)) {
  for (const Count x : counts_) {
    if (x < 0) throw std::invalid_argument("arrival counts must be non-negative");
  }
}

Count ArrivalTrace::total() const { return std::accumulate(counts_.begin(), counts_.end(), Count{0}); }

CostLedger score(const ArrivalTrace& trace, const Schedule& schedule, const CostParams& params,
                 bool initial_fetch_charged) {
  const std::size_t horizon = trace.horizon();
  if (schedule.horizon() != horizon) {
    throw ScheduleMismatch("schedule has " + std::to_string(schedule.horizon()) +
                           " slots but the trace has " + std::to_string(horizon));
  }
  if (schedule.starts_cached() && !initial_fetch_charged) {
    throw ContractViolation("schedule is cached in slot 1 without a pre-horizon fetch");
  }

  CostLedger ledger;
  ledger.per_slot.resize(horizon);
  const Rational& fetch = params.fetch_cost();
  const Rational& rent = params.rent_cost();

  if (schedule.starts_cached()) {
    ledger.setup_fetch = fetch;
    ledger.num_fetches = 1;
  }
  Rational service_sum;
  Rational fetch_sum = ledger.setup_fetch;
  Rational rent_sum;
  for (std::size_t i = 0; i < horizon; ++i) {
    const Count x = trace.counts()[i];
    const bool now = schedule.cached[i];
    const bool next = i + 1 < horizon ? static_cast<bool>(schedule.cached[i + 1]) : schedule.cached_after;
    SlotCost& slot = ledger.per_slot[i];
    slot.service = Rational(now ? overflow(x, params.kappa()) : x);
    slot.rent = now ? rent : Rational(0);
    if (!now && next) {
      slot.fetch = fetch;
      ++ledger.num_fetches;
    }
    if (now && !next) ++ledger.num_evictions;
    service_sum += slot.service;
    fetch_sum += slot.fetch;
    rent_sum += slot.rent;
  }
  ledger.totals = CostTotals{service_sum, fetch_sum, rent_sum, service_sum + fetch_sum + rent_sum};
  return ledger;
}

EmpiricalRatio competitive_ratio_empirical(const Rational& policy_cost, const Rational& opt_cost) {
  if (policy_cost < 0 || opt_cost < 0) throw std::invalid_argument("costs must be non-negative");
  if (opt_cost == Rational(0)) {
    if (policy_cost == Rational(0)) return {Rational(1), false};
    return {Rational(0), true};
  }
  return {policy_cost / opt_cost, false};
}

namespace {

template <class Num>
void validate_stats(const BasicArrivalStats<Num>& s, Count kappa, Num slack) {
  if (s.mu < -slack || s.mu > s.nu + slack) throw std::invalid_argument("arrival stats need 0 <= mu <= nu");
  if (s.p0 < -slack || s.p0 > Num(1) + slack) throw std::invalid_argument("arrival stats need p0 in [0, 1]");
  if (s.mu > Num(kappa) + slack) throw std::invalid_argument("arrival stats need mu <= kappa");
}

}  // namespace

void validate(const ArrivalStats& stats, Count kappa) { validate_stats(stats, kappa, 1e-12); }
void validate(const ExactArrivalStats& stats, Count kappa) { validate_stats(stats, kappa, Rational(0)); }

ArrivalStats to_double(const ExactArrivalStats& s) {
  return {to_double(s.nu), to_double(s.mu), to_double(s.p0)};
}

}  // namespace edgecache
