#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "edgecache/rational.hpp"

namespace edgecache {

using Count = std::int64_t;
// Slots are numbered from 1 in every report; vectors are indexed from 0.
using Slot = std::int64_t;

class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ScheduleMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Costs in integer units of 1/unit_den. Exact for every quantity the
// policies and the offline solvers compare.
struct ScaledCosts {
  std::int64_t unit_den = 1;
  std::int64_t fetch = 0;
  std::int64_t rent = 0;
  Count kappa = 1;

  Rational to_rational(std::int64_t units) const { return Rational(units, unit_den); }
};

// Fetch cost M > 1, rent c in [0, kappa), edge capacity kappa >= 1.
class CostParams {
 public:
  CostParams(Rational fetch_cost, Rational rent_cost, Count kappa);

  const Rational& fetch_cost() const { return fetch_; }
  const Rational& rent_cost() const { return rent_; }
  Count kappa() const { return kappa_; }

  ScaledCosts scaled() const;
  std::string describe() const;

  friend bool operator==(const CostParams&, const CostParams&) = default;

 private:
  Rational fetch_;
  Rational rent_;
  Count kappa_;
};

class ArrivalTrace {
 public:
  ArrivalTrace() = default;
  explicit ArrivalTrace(std::vector<Count> counts);

  std::size_t horizon() const { return counts_.size(); }
  bool empty() const { return counts_.empty(); }
  const std::vector<Count>& counts() const { return counts_; }
  // 1-based slot access.
  Count at(Slot t) const { return counts_.at(static_cast<std::size_t>(t - 1)); }
  Count total() const;

  friend bool operator==(const ArrivalTrace&, const ArrivalTrace&) = default;

 private:
  std::vector<Count> counts_;
};

inline Count served_at_edge(Count x, Count kappa) { return x < kappa ? x : kappa; }
inline Count overflow(Count x, Count kappa) { return x - served_at_edge(x, kappa); }

// cached[t-1] is r_t. cached_after is r_{T+1}, the decision taken at the
// end of the last slot; a fetch decided there is charged in slot T. On an
// empty horizon cached_after is r_1 itself.
struct Schedule {
  std::vector<bool> cached;
  bool cached_after = false;

  std::size_t horizon() const { return cached.size(); }
  bool starts_cached() const { return cached.empty() ? cached_after : static_cast<bool>(cached.front()); }
  bool at(Slot t) const { return cached.at(static_cast<std::size_t>(t - 1)); }

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

struct SlotCost {
  Rational service;
  Rational fetch;
  Rational rent;

  Rational total() const { return service + fetch + rent; }
  friend bool operator==(const SlotCost&, const SlotCost&) = default;
};

struct CostTotals {
  Rational service;
  Rational fetch;
  Rational rent;
  Rational total;

  friend bool operator==(const CostTotals&, const CostTotals&) = default;
};

struct CostLedger {
  std::vector<SlotCost> per_slot;
  // Pre-horizon fetch for schedules that start cached.
  Rational setup_fetch;
  CostTotals totals;
  int num_fetches = 0;
  int num_evictions = 0;

  friend bool operator==(const CostLedger&, const CostLedger&) = default;
};

// Scores a schedule under the rent/fetch/forward cost model. Per slot:
// arrivals, then service (edge serves min(x, kappa) when cached), then the
// caching decision whose fetch is charged in the same slot.
CostLedger score(const ArrivalTrace& trace, const Schedule& schedule, const CostParams& params,
                 bool initial_fetch_charged);

struct EmpiricalRatio {
  Rational value;
  bool infinite = false;
};

// policy_cost / opt_cost; 0/0 is 1 and x/0 for x > 0 is flagged infinite.
EmpiricalRatio competitive_ratio_empirical(const Rational& policy_cost, const Rational& opt_cost);

// nu = E[X], mu = E[min(X, kappa)], p0 = P(X = 0).
template <class Num>
struct BasicArrivalStats {
  Num nu{};
  Num mu{};
  Num p0{};
};

using ArrivalStats = BasicArrivalStats<double>;
using ExactArrivalStats = BasicArrivalStats<Rational>;

void validate(const ArrivalStats& stats, Count kappa);
void validate(const ExactArrivalStats& stats, Count kappa);
ArrivalStats to_double(const ExactArrivalStats& stats);

}  // namespace edgecache
