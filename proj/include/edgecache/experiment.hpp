#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "edgecache/arrivals.hpp"
#include "edgecache/core.hpp"
#include "edgecache/policies.hpp"

namespace edgecache {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SweepAxis { kNone, kFetch, kRent, kKappa, kArrivalParam, kTtl };

std::string axis_name(SweepAxis axis);

// Flat key=value configuration. Keys:
//   policies     comma list of rr, err, ttl, ttl(L), ttl-alg(L), always, never,
//                opt_off, opt_on_lower
//   M, c, kappa  cost parameters (rationals; kappa an integer)
//   L            TTL value for a bare "ttl" entry
//   arrivals     bernoulli(p) | poisson(rate) | empirical(p0,p1,...)
//   T, seeds     horizon and repetitions for i.i.d. arrivals
//   trace        count file (one per line); replaces arrivals/T/seeds
//   master_seed  64-bit seed fanned out with mix_seed
//   sweep        M | c | kappa | p | rate | L, with values
//   values       comma list, or start:stop:step (inclusive, exact)
//   threads      worker count, 0 = hardware concurrency
//   output       CSV path, "-" for stdout
struct ExperimentConfig {
  std::vector<std::string> policies{"rr", "ttl", "opt_off", "opt_on_lower"};
  Rational fetch{4};
  Rational rent{Rational(1, 2)};
  Count kappa = 1;
  Slot ttl = 3;
  std::string arrivals = "bernoulli(0.4)";
  std::int64_t horizon = 10000;
  std::int64_t seeds = 1;
  std::optional<std::string> trace_path;
  std::uint64_t master_seed = 1;
  SweepAxis sweep = SweepAxis::kNone;
  std::vector<Rational> values;
  unsigned threads = 0;
  std::string output = "-";

  void set(const std::string& key, const std::string& value);
  void validate() const;
};

// Reads "key = value" lines; '#' starts a comment.
ExperimentConfig load_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {});
// "key=value" override.
void apply_override(ExperimentConfig& cfg, const std::string& assignment);

std::vector<Rational> parse_value_list(const std::string& text);

struct ResultRow {
  std::string policy;
  std::string sweep_param;
  std::string sweep_value;
  // Per-slot averages over all seeds; service + fetch + rent = avg.
  std::optional<Rational> avg_cost_per_slot;
  Rational service;
  Rational fetch;
  Rational rent;
  double num_fetches = 0.0;
  std::int64_t seeds = 0;
  std::optional<Rational> opt_off_per_slot;
  std::optional<double> opt_on_lower;
  std::optional<Rational> rho_rr_upper;
  std::optional<Rational> rho_any_lower;
  std::optional<Rational> rho_ttl_lower;
  std::optional<double> sigma_rr_upper;
  std::optional<double> sigma_ttl_lower;
  std::string note;
  // Position of the sweep point in the config; not written.
  std::size_t point_index = 0;

  // Sort key for order-independent output.
  bool operator<(const ResultRow& other) const;
};

std::vector<std::string> result_row_fields();

// Runs every policy on every (sweep point, seed) trace, in parallel.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);

}  // namespace edgecache
