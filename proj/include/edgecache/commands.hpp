#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "edgecache/arrivals.hpp"
#include "edgecache/experiment.hpp"
#include "edgecache/policies.hpp"
#include "edgecache/verify.hpp"

namespace edgecache {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitVerifyFailed = 2, kExitIo = 3 };

// Runs the experiment and writes CSV to cfg.output ("-" = out).
int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

int cmd_adversary(const PolicySpec& policy, const CostParams& params, std::int64_t horizon_cap, std::ostream& out);

struct BoundsRequest {
  std::optional<IidDistribution> arrivals;
  std::optional<Slot> ttl;
  std::optional<std::int64_t> horizon;
};

int cmd_bounds(const CostParams& params, const BoundsRequest& request, std::ostream& out);

int cmd_verify(Suite suite, std::int64_t budget, std::uint64_t master_seed, std::ostream& out);

// Writes the binned trace (one count per line) to out and a summary to log.
int cmd_ingest(const TraceIngestConfig& cfg, std::ostream& out, std::ostream& log);

// "4x1 4x0" style run-length summary of a trace.
std::string run_length_summary(const ArrivalTrace& trace, std::size_t max_runs = 12);

}  // namespace edgecache
