#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "edgecache/arrivals.hpp"
#include "edgecache/core.hpp"

namespace edgecache {

struct Instance {
  CostParams params;
  ArrivalTrace trace;
  // bernoulli | poisson | bursty
  std::string source;

  std::string describe() const;
};

// M = 1 + k/d in (1, 32], kappa in [1, max_kappa], c = j/d' in [0, kappa).
// With positive_rent the draw excludes c = 0.
CostParams random_params(Rng& rng, Count max_kappa = 8, bool positive_rent = false);

// Mix of scaled Bernoulli, Poisson and on/off bursty arrivals.
ArrivalTrace random_trace(Rng& rng, Count kappa, std::int64_t horizon, std::string* source = nullptr);

Instance random_instance(Rng& rng, std::int64_t min_horizon, std::int64_t max_horizon, Count max_kappa = 8);

// Property checks; each returns an empty string on success.
std::string check_equivalence(const Instance& inst);
// DP against brute force: equal cost, scored schedules match, DP no worse
// than any policy schedule. Horizon must fit the brute force.
std::string check_oracle(const Instance& inst);
std::string check_frames(const Instance& inst);
std::string check_structure(const Instance& inst);
// cost_RR <= rho_rr_upper * cost_OPT-OFF, exact.
std::string check_rr_guarantee(const Instance& inst);

// Delta-debugging style shrink: removes halves, quarters, ... of the trace
// while the predicate still fails.
ArrivalTrace shrink_trace(const ArrivalTrace& trace, const std::function<bool(const ArrivalTrace&)>& fails);

enum class Suite { kEquivalence, kOracle, kFrames, kStructure, kBoundsConsistency };

Suite parse_suite(std::string_view name);
std::string suite_name(Suite suite);

struct SuiteReport {
  std::string suite;
  std::int64_t instances = 0;
  std::int64_t failures = 0;
  std::string first_failure;
  std::optional<Instance> counterexample;

  bool ok() const { return failures == 0; }
};

SuiteReport run_suite(Suite suite, std::int64_t budget, std::uint64_t master_seed);

}  // namespace edgecache
