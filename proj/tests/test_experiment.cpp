#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "edgecache/commands.hpp"
#include "edgecache/experiment.hpp"

using namespace edgecache;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.horizon = 2000;
  cfg.seeds = 3;
  cfg.threads = 4;
  return cfg;
}

std::string csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream in(
      "# fig 1\n"
      "policies = rr, ttl(3), opt_off\n"
      "M = 4\n"
      "c = 0.35\n"
      "arrivals = bernoulli(0.4)\n"
      "T = 100   # short\n"
      "repetitions = 2\n"
      "sweep = c\n"
      "values = 0:1/2:1/4\n");
  const ExperimentConfig cfg = load_config(in);
  CHECK(cfg.policies == std::vector<std::string>{"rr", "ttl(3)", "opt_off"});
  CHECK(cfg.fetch == Rational(4));
  CHECK(cfg.rent == Rational(7, 20));
  CHECK(cfg.horizon == 100);
  CHECK(cfg.seeds == 2);
  CHECK(cfg.sweep == SweepAxis::kRent);
  CHECK(cfg.values == std::vector<Rational>{Rational(0), Rational(1, 4), Rational(1, 2)});
}

TEST_CASE("value lists") {
  CHECK(parse_value_list("1,2,3/2").size() == 3);
  CHECK(parse_value_list("0:0.95:0.05").size() == 20);
  CHECK_THROWS_AS(parse_value_list("0:1:0"), ConfigError);
  CHECK_THROWS_AS(parse_value_list("0:1"), ConfigError);
}

TEST_CASE("config errors") {
  ExperimentConfig cfg;
  CHECK_THROWS_AS(cfg.set("colour", "blue"), ConfigError);
  CHECK_THROWS_AS(cfg.set("T", "ten"), ConfigError);
  CHECK_THROWS_AS(cfg.set("sweep", "lambda"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "M"), ConfigError);
  apply_override(cfg, "seeds=0");
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  ExperimentConfig bad;
  bad.rent = Rational(2);
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  ExperimentConfig dangling;
  dangling.sweep = SweepAxis::kFetch;
  CHECK_THROWS_AS(dangling.validate(), ConfigError);
  CHECK_THROWS_AS(load_config_file("/nonexistent/edgecache.cfg"), TraceIoError);
}

TEST_CASE("CSV header matches the row fields") {
  const std::string out = csv({});
  CHECK(out ==
        "policy,sweep_param,sweep_value,avg_cost_per_slot,avg_cost_per_slot_exact,service,fetch,rent,num_fetches,"
        "seeds,opt_off_per_slot,opt_on_lower,rho_rr_upper,rho_any_lower,rho_ttl_lower,sigma_rr_upper,"
        "sigma_ttl_lower,note\n");
}

TEST_CASE("rows: components, ordering, bounds") {
  ExperimentConfig cfg = small_config();
  cfg.policies = {"rr", "ttl(3)", "always", "opt_off", "opt_on_lower"};
  cfg.sweep = SweepAxis::kFetch;
  cfg.values = {Rational(2), Rational(4)};
  const auto rows = run_experiment(cfg);
  REQUIRE(rows.size() == 10);
  for (const auto& r : rows) {
    CHECK(r.seeds == 3);
    CHECK(r.sweep_param == "M");
    CHECK(r.rho_rr_upper.has_value());
    if (r.policy == "opt_on_lower") {
      CHECK_FALSE(r.avg_cost_per_slot.has_value());
      continue;
    }
    REQUIRE(r.avg_cost_per_slot.has_value());
    CHECK(r.service + r.fetch + r.rent == *r.avg_cost_per_slot);
    CHECK(*r.avg_cost_per_slot >= *r.opt_off_per_slot);
    if (r.policy == "opt_off") CHECK(*r.avg_cost_per_slot == *r.opt_off_per_slot);
    if (r.policy == "ttl(3)") CHECK(r.rho_ttl_lower.has_value());
    if (r.policy == "rr") CHECK(r.sigma_rr_upper.has_value());
  }
}

TEST_CASE("output is deterministic and thread independent") {
  ExperimentConfig cfg = small_config();
  cfg.sweep = SweepAxis::kRent;
  cfg.values = parse_value_list("0:0.9:0.3");
  const std::string a = csv(run_experiment(cfg));
  cfg.threads = 1;
  CHECK(csv(run_experiment(cfg)) == a);
  cfg.master_seed = 2;
  CHECK(csv(run_experiment(cfg)) != a);
}

TEST_CASE("empty horizon gives zero-cost rows") {
  ExperimentConfig cfg;
  cfg.horizon = 0;
  const auto rows = run_experiment(cfg);
  CHECK_FALSE(rows.empty());
  for (const auto& r : rows) {
    if (r.avg_cost_per_slot) CHECK(*r.avg_cost_per_slot == Rational(0));
  }

  const auto path = std::filesystem::temp_directory_path() / "edgecache_test_empty_trace.txt";
  std::ofstream(path) << "";
  ExperimentConfig from_file;
  from_file.trace_path = path.string();
  for (const auto& r : run_experiment(from_file)) {
    if (r.avg_cost_per_slot) CHECK(*r.avg_cost_per_slot == Rational(0));
  }
}

TEST_CASE("trace-file runs estimate stats from the trace") {
  const auto path = std::filesystem::temp_directory_path() / "edgecache_test_trace.txt";
  std::ofstream(path) << "1\n0\n1\n1\n0\n";
  ExperimentConfig cfg;
  cfg.trace_path = path.string();
  cfg.policies = {"never"};
  const auto rows = run_experiment(cfg);
  REQUIRE(rows.size() == 1);
  CHECK(*rows[0].avg_cost_per_slot == Rational(3, 5));
  CHECK(rows[0].opt_on_lower.value() == doctest::Approx(0.5));
  CHECK(rows[0].note.find("estimated") != std::string::npos);
}

TEST_CASE("command exit codes") {
  std::ostringstream out;
  std::ostringstream err;
  ExperimentConfig cfg = small_config();
  cfg.output = "/nonexistent/dir/out.csv";
  CHECK(cmd_simulate(cfg, out, err) == kExitIo);
  cfg.output = "-";
  CHECK(cmd_simulate(cfg, out, err) == kExitOk);
  CHECK(cmd_verify(Suite::kEquivalence, 50, 1, out) == kExitOk);
}

TEST_CASE("bounds table") {
  const CostParams p(Rational(2), Rational(1, 2), 1);
  std::ostringstream plain;
  cmd_bounds(p, {}, plain);
  CHECK(plain.str().find("9/4") != std::string::npos);
  CHECK(plain.str().find("7/5") != std::string::npos);
  CHECK(plain.str().find("opt_on_lower") == std::string::npos);
  CHECK(plain.str().find("rho_ttl_lower") == std::string::npos);

  BoundsRequest full;
  full.ttl = 3;
  full.horizon = 10000;
  full.arrivals = IidDistribution::bernoulli(0.5);
  std::ostringstream equal;
  cmd_bounds(p, full, equal);
  CHECK(equal.str().find("RR matches OPT-ON") != std::string::npos);
  CHECK(equal.str().find("rho_ttl_lower") != std::string::npos);
}

TEST_CASE("adversary report") {
  std::ostringstream out;
  cmd_adversary(PolicySpec::parse("never"), CostParams(Rational(2), Rational(1, 2), 1), 100, out);
  CHECK(out.str().find("non-reactive") != std::string::npos);
  CHECK(run_length_summary(ArrivalTrace({1, 1, 0})) == "2x1 1x0");
  CHECK(run_length_summary(ArrivalTrace()) == "(empty)");
}
