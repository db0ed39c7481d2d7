// edgecache: simulate, sweep, attack and verify service-caching policies.
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "edgecache/commands.hpp"

using namespace edgecache;

namespace {

struct CostFlags {
  std::string fetch = "4";
  std::string rent = "1/2";
  Count kappa = 1;

  void add(CLI::App* app) {
    app->add_option("-M,--fetch", fetch, "fetch cost M (rational)")->capture_default_str();
    app->add_option("-c,--rent", rent, "rent cost per slot c (rational)")->capture_default_str();
    app->add_option("-k,--kappa", kappa, "edge capacity per slot")->capture_default_str();
  }
  CostParams get() const { return CostParams(parse_rational(fetch), parse_rational(rent), kappa); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online service caching at an edge server: RetroRenting, TTL and offline benchmarks"};
  app.require_subcommand(1);

  // simulate / sweep share the experiment config
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output;
  auto add_experiment = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "key=value config file");
    sub->add_option("-s,--set", overrides, "override, key=value (repeatable)");
    sub->add_option("-o,--output", output, "CSV path ('-' for stdout)");
  };
  CLI::App* simulate = app.add_subcommand("simulate", "run policies on i.i.d. arrivals or a trace, write CSV");
  add_experiment(simulate);
  CLI::App* sweep = app.add_subcommand("sweep", "like simulate, but a sweep axis is required");
  add_experiment(sweep);

  CLI::App* adversary = app.add_subcommand("adversary", "adaptive lower-bound sequence against one policy");
  CostFlags adv_costs;
  adv_costs.add(adversary);
  std::string adv_policy = "rr";
  std::int64_t cap = 10000;
  adversary->add_option("-p,--policy", adv_policy, "rr | err | ttl(L) | ttl-alg(L) | always | never")
      ->capture_default_str();
  adversary->add_option("--cap", cap, "horizon cap for the probe")->capture_default_str();

  CLI::App* bounds = app.add_subcommand("bounds", "print the closed-form bounds");
  CostFlags bound_costs;
  bound_costs.add(bounds);
  std::string bound_arrivals;
  std::optional<Slot> bound_ttl;
  std::optional<std::int64_t> bound_horizon;
  bounds->add_option("-a,--arrivals", bound_arrivals, "bernoulli(p) | poisson(rate) | empirical(...)");
  bounds->add_option("-L,--ttl", bound_ttl, "TTL value");
  bounds->add_option("-T,--horizon", bound_horizon, "horizon for the finite-T ratio bounds");

  CLI::App* verify = app.add_subcommand("verify", "run a property suite");
  std::string suite = "equivalence";
  std::int64_t budget = 1000;
  std::uint64_t seed = 1;
  verify->add_option("suite", suite, "equivalence | oracle | frames | structure | bounds-consistency")
      ->capture_default_str();
  verify->add_option("-n,--budget", budget, "number of random instances")->capture_default_str();
  verify->add_option("--seed", seed, "master seed")->capture_default_str();

  CLI::App* ingest = app.add_subcommand("ingest", "bin event timestamps into per-slot counts");
  TraceIngestConfig icfg;
  std::string ingest_out = "-";
  std::string delimiter = ",";
  ingest->add_option("input", icfg.path, "delimited text file, one event per row")->required();
  ingest->add_option("--timestamp-col", icfg.timestamp_column, "column name or zero-based index")
      ->capture_default_str();
  ingest->add_option("--slot-duration", icfg.slot_duration, "time units per slot (default: auto-tune)");
  ingest->add_option("--filter", icfg.filter, "keep rows whose filter column equals this");
  ingest->add_option("--filter-col", icfg.filter_column, "column for --filter");
  ingest->add_option("--delimiter", delimiter, "field separator")->capture_default_str();
  ingest->add_option("-o,--output", ingest_out, "count file ('-' for stdout)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed() || sweep->parsed()) {
      ExperimentConfig cfg;
      if (!config_path.empty()) cfg = load_config_file(config_path);
      for (const auto& o : overrides) apply_override(cfg, o);
      if (!output.empty()) cfg.output = output;
      if (sweep->parsed() && cfg.sweep == SweepAxis::kNone) throw ConfigError("sweep needs a sweep axis");
      return cmd_simulate(cfg, std::cout, std::cerr);
    }
    if (adversary->parsed()) {
      return cmd_adversary(PolicySpec::parse(adv_policy), adv_costs.get(), cap, std::cout);
    }
    if (bounds->parsed()) {
      BoundsRequest req;
      if (!bound_arrivals.empty()) req.arrivals = IidDistribution::parse(bound_arrivals);
      req.ttl = bound_ttl;
      req.horizon = bound_horizon;
      return cmd_bounds(bound_costs.get(), req, std::cout);
    }
    if (verify->parsed()) {
      return cmd_verify(parse_suite(suite), budget, seed, std::cout);
    }
    if (ingest->parsed()) {
      if (delimiter.size() != 1) throw ConfigError("delimiter must be one character");
      icfg.delimiter = delimiter.front();
      if (ingest_out == "-") return cmd_ingest(icfg, std::cout, std::cerr);
      std::ofstream file(ingest_out);
      if (!file) {
        std::cerr << "cannot write '" << ingest_out << "'\n";
        return kExitIo;
      }
      return cmd_ingest(icfg, file, std::cerr);
    }
  } catch (const TraceIoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
