#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "edgecache/core.hpp"
#include "edgecache/policies.hpp"

namespace edgecache {

class InvalidDistribution : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// All generators draw from mt19937_64. A uniform in [0, 1) is the top 53 bits
// of one output times 2^-53; nothing goes through <random> distributions, whose
// algorithms differ between standard libraries.
using Rng = std::mt19937_64;
double uniform01(Rng& rng);

// Seed for run i of a batch: splitmix64 finaliser applied to master XOR i.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

class IidDistribution {
 public:
  enum class Kind { kBernoulli, kPoisson, kEmpirical };

  static IidDistribution bernoulli(double p);
  // Rates above 700 underflow exp(-rate) and are rejected.
  static IidDistribution poisson(double rate);
  // table[x] = P(X = x); must sum to 1 within 1e-9.
  static IidDistribution empirical(std::vector<double> table);
  // bernoulli(p) | poisson(rate) | empirical(p0,p1,...)
  static IidDistribution parse(std::string_view text);

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }
  const std::vector<double>& table() const { return table_; }

  double nu() const;
  double mu(Count kappa) const;
  double p0() const;
  ArrivalStats stats(Count kappa) const;

  // Bernoulli: u < p. Poisson: sequential inversion. Empirical: inversion
  // over the cumulative table.
  Count sample(Rng& rng) const;
  std::string describe() const;

 private:
  IidDistribution(Kind kind, double param, std::vector<double> table)
      : kind_(kind), param_(param), table_(std::move(table)) {}

  Kind kind_;
  double param_;
  std::vector<double> table_;
};

ArrivalTrace gen_iid(const IidDistribution& dist, std::int64_t horizon, std::uint64_t seed);

// Adaptive adversary from the deterministic lower bound. The policy is only
// driven through step(); it must be freshly constructed.
struct Theorem2Attack {
  ArrivalTrace trace;
  Rational alt_cost;
  Rational policy_cost;
  bool started_cached = false;
  // First fetch (uncached start) or first eviction (cached start); 0 if none.
  Slot switch_slot = 0;
  // No switch happened within the cap.
  bool non_reactive = false;

  EmpiricalRatio ratio() const { return competitive_ratio_empirical(policy_cost, alt_cost); }
};

Theorem2Attack adversary_theorem2(Policy policy, const CostParams& params, std::int64_t horizon_cap);

enum class TtlBranch {
  // kappa < M + c
  kSmallBurst,
  // kappa >= M + c and Lc > M
  kLongHold,
  // kappa >= M + c and Lc <= M
  kShortHold,
};

TtlBranch ttl_branch(const CostParams& params, Slot ttl);

struct TtlConstruction {
  TtlBranch branch;
  std::string name;
  ArrivalTrace trace;
  // Cost of the comparison schedule used in the lower-bound argument.
  Rational comparison_cost;
};

// The three sequences against TTL(L): one request then silence; a kappa burst
// then silence; kappa bursts every L+1 slots, `repetitions` times.
std::vector<TtlConstruction> adversary_ttl(const CostParams& params, Slot ttl, std::int64_t repetitions = 1000);

struct TraceIngestConfig {
  std::string path;
  // Column name (first row is a header) or zero-based index.
  std::string timestamp_column = "0";
  // Unset: smallest width that separates every pair of distinct timestamps.
  std::optional<double> slot_duration;
  // Keep only rows whose filter column equals filter exactly.
  std::optional<std::string> filter;
  std::string filter_column;
  char delimiter = ',';
  // Guard against absurd slot counts from a tiny slot duration.
  std::int64_t max_slots = 100'000'000;
};

struct IngestResult {
  ArrivalTrace trace;
  std::int64_t events = 0;
  std::int64_t skipped_rows = 0;
  double slot_duration = 0.0;
};

class TraceIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

IngestResult ingest_trace(const TraceIngestConfig& cfg);
// Same binning on in-memory timestamps.
IngestResult bin_timestamps(std::vector<double> timestamps, std::optional<double> slot_duration,
                            std::int64_t max_slots = 100'000'000);

// One count per line; blank lines and '#' comments are ignored on read.
void write_trace(std::ostream& out, const ArrivalTrace& trace);
ArrivalTrace read_trace(std::istream& in);
ArrivalTrace read_trace_file(const std::string& path);

}  // namespace edgecache
