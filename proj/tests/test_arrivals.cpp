#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "edgecache/arrivals.hpp"
#include "edgecache/bounds.hpp"

using namespace edgecache;

namespace {

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("edgecache_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

std::int64_t total(const ArrivalTrace& t) {
  return std::accumulate(t.counts().begin(), t.counts().end(), std::int64_t{0});
}

}  // namespace

TEST_CASE("degenerate bernoulli") {
  const ArrivalTrace zeros = gen_iid(IidDistribution::bernoulli(0.0), 1000, 7);
  const ArrivalTrace ones = gen_iid(IidDistribution::bernoulli(1.0), 1000, 7);
  CHECK(total(zeros) == 0);
  CHECK(total(ones) == 1000);
  CHECK(gen_iid(IidDistribution::bernoulli(0.5), 0, 7).horizon() == 0);
}

TEST_CASE("bernoulli mean within the CLT band") {
  const std::int64_t n = 1000000;
  const double p = 0.4;
  const double mean = static_cast<double>(total(gen_iid(IidDistribution::bernoulli(p), n, 42))) / n;
  CHECK(std::abs(mean - p) <= 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("poisson mean and zero mass") {
  const std::int64_t n = 200000;
  const double rate = 2.5;
  const ArrivalTrace t = gen_iid(IidDistribution::poisson(rate), n, 3);
  const double mean = static_cast<double>(total(t)) / n;
  CHECK(std::abs(mean - rate) <= 4.0 * std::sqrt(rate / n));
  const auto zeros = std::count(t.counts().begin(), t.counts().end(), 0);
  CHECK(std::abs(static_cast<double>(zeros) / n - std::exp(-rate)) < 0.005);
}

TEST_CASE("generation is reproducible and seed dependent") {
  const auto d = IidDistribution::poisson(1.0);
  CHECK(gen_iid(d, 500, 11).counts() == gen_iid(d, 500, 11).counts());
  CHECK(gen_iid(d, 500, 11).counts() != gen_iid(d, 500, 12).counts());
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 5) == mix_seed(1, 5));
}

TEST_CASE("uniform01 stays in [0, 1)") {
  Rng rng(1);
  bool ok = true;
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform01(rng);
    ok = ok && u >= 0.0 && u < 1.0;
  }
  CHECK(ok);
}

TEST_CASE("distribution moments") {
  const auto b = IidDistribution::bernoulli(0.4);
  CHECK(b.nu() == doctest::Approx(0.4));
  CHECK(b.mu(1) == doctest::Approx(0.4));
  CHECK(b.p0() == doctest::Approx(0.6));

  const auto e = IidDistribution::empirical({0.5, 0.2, 0.3});
  CHECK(e.nu() == doctest::Approx(0.8));
  CHECK(e.mu(1) == doctest::Approx(0.5));
  CHECK(e.mu(2) == doctest::Approx(0.8));

  // E[min(X, 1)] = 1 - e^{-rate}
  const auto p = IidDistribution::poisson(1.5);
  CHECK(p.mu(1) == doctest::Approx(1.0 - std::exp(-1.5)));
  CHECK(p.nu() == doctest::Approx(1.5));
  CHECK(p.mu(200) == doctest::Approx(1.5));
}

TEST_CASE("distribution parsing") {
  CHECK(IidDistribution::parse("bernoulli(0.25)").parameter() == doctest::Approx(0.25));
  CHECK(IidDistribution::parse(" poisson( 3 ) ").kind() == IidDistribution::Kind::kPoisson);
  CHECK(IidDistribution::parse("empirical(0.5,0.5)").table().size() == 2);
  CHECK_THROWS_AS(IidDistribution::parse("bernoulli(1.5)"), InvalidDistribution);
  CHECK_THROWS_AS(IidDistribution::parse("poisson(-1)"), InvalidDistribution);
  CHECK_THROWS_AS(IidDistribution::parse("poisson(701)"), InvalidDistribution);
  CHECK_THROWS_AS(IidDistribution::parse("empirical(0.5,0.4)"), InvalidDistribution);
  CHECK_THROWS_AS(IidDistribution::parse("geometric(0.5)"), InvalidDistribution);
  CHECK_THROWS_AS(IidDistribution::parse("bernoulli"), InvalidDistribution);
}

TEST_CASE("adversary against RR") {
  const CostParams p(Rational(2), Rational(1, 2), 1);
  const Theorem2Attack a = adversary_theorem2(Policy(PolicySpec::parse("rr"), p), p, 10000);
  CHECK_FALSE(a.started_cached);
  CHECK(a.switch_slot == 4);
  CHECK(a.trace.counts() == std::vector<Count>{1, 1, 1, 1, 0, 0, 0, 0});
  CHECK(a.policy_cost == Rational(8));
  CHECK(a.alt_cost == Rational(4));
  CHECK(a.ratio().value >= rho_any_lower(p));
}

TEST_CASE("adversary against static policies") {
  const CostParams p(Rational(2), Rational(1, 2), 1);
  const Theorem2Attack never = adversary_theorem2(Policy(PolicySpec::parse("never"), p), p, 5000);
  CHECK(never.non_reactive);
  CHECK(never.trace.horizon() == 5000);
  CHECK(never.policy_cost == Rational(5000));
  CHECK(never.alt_cost == Rational(2502));

  const Theorem2Attack always = adversary_theorem2(Policy(PolicySpec::parse("always"), p), p, 100);
  CHECK(always.started_cached);
  CHECK(always.non_reactive);
  CHECK(always.alt_cost == Rational(5, 2));
  CHECK(always.ratio().value == Rational(104, 5));
}

TEST_CASE("TTL constructions") {
  const CostParams p(Rational(2), Rational(1, 2), 1);
  const auto cs = adversary_ttl(p, 3, 5);
  REQUIRE(cs.size() == 3);
  CHECK(cs[0].trace.counts() == std::vector<Count>{1, 0, 0, 0, 0});
  CHECK(cs[1].comparison_cost == Rational(5, 2));
  CHECK(cs[2].trace.horizon() == 20);
  CHECK(cs[2].comparison_cost == Rational(2) + Rational(4 * 3 + 5, 2));

  // kappa < M + c: the single request realises the bound exactly.
  CHECK(ttl_branch(p, 3) == TtlBranch::kSmallBurst);
  const Rational ttl_cost = simulate(PolicySpec::parse("ttl(3)"), p, cs[0].trace).totals.total;
  CHECK(ttl_cost / cs[0].comparison_cost == rho_ttl_lower(p, 3));

  // Lc > M with a large burst.
  const CostParams q(Rational(2), Rational(1, 2), 4);
  CHECK(ttl_branch(q, 6) == TtlBranch::kLongHold);
  const auto qs = adversary_ttl(q, 6);
  CHECK(simulate(PolicySpec::parse("ttl(6)"), q, qs[1].trace).totals.total / qs[1].comparison_cost ==
        rho_ttl_lower(q, 6));

  // One repetition of the periodic sequence is the burst.
  CHECK(ttl_branch(q, 2) == TtlBranch::kShortHold);
  const auto one = adversary_ttl(q, 2, 1);
  CHECK(one[2].comparison_cost == one[1].comparison_cost);
  CHECK_THROWS(adversary_ttl(q, 0));
}

TEST_CASE("timestamp binning") {
  const IngestResult r = bin_timestamps({0.1, 0.2, 5.0}, 1.0);
  CHECK(r.trace.counts() == std::vector<Count>{2, 0, 0, 0, 0, 1});
  CHECK(r.events == 3);

  const IngestResult tuned = bin_timestamps({0.1, 0.2, 5.0}, std::nullopt);
  CHECK(*std::max_element(tuned.trace.counts().begin(), tuned.trace.counts().end()) == 1);
  CHECK(total(tuned.trace) == 3);

  CHECK(bin_timestamps({}, 1.0).trace.horizon() == 0);
  CHECK(bin_timestamps({3.0, 3.0}, std::nullopt).trace.counts() == std::vector<Count>{2});
  CHECK_THROWS(bin_timestamps({0.0, 1.0}, 0.0));
  CHECK_THROWS(bin_timestamps({0.0, 1e9}, 1e-3, 1000));
}

TEST_CASE("CSV ingestion") {
  TraceIngestConfig cfg;
  cfg.path = temp_file("plain.csv", "0.5\n1.5\nnot-a-number\n1.7\n\n4.2\n");
  cfg.slot_duration = 1.0;
  const IngestResult r = ingest_trace(cfg);
  CHECK(r.trace.counts() == std::vector<Count>{1, 2, 0, 0, 1});
  CHECK(r.events == total(r.trace));
  CHECK(r.skipped_rows >= 1);

  TraceIngestConfig named;
  named.path = temp_file("named.csv", "obj,ts\na,0.1\nb,0.2\na,2.3\na,2.9\n");
  named.timestamp_column = "ts";
  named.filter = "a";
  named.filter_column = "obj";
  named.slot_duration = 1.0;
  const IngestResult n = ingest_trace(named);
  CHECK(n.trace.counts() == std::vector<Count>{1, 0, 2});
  CHECK(n.events == 3);

  TraceIngestConfig empty;
  empty.path = temp_file("empty.csv", "");
  empty.slot_duration = 1.0;
  CHECK(ingest_trace(empty).trace.horizon() == 0);

  TraceIngestConfig missing;
  missing.path = "/nonexistent/edgecache.csv";
  CHECK_THROWS_AS(ingest_trace(missing), TraceIoError);

  named.timestamp_column = "when";
  CHECK_THROWS(ingest_trace(named));
}

TEST_CASE("trace file round trip") {
  const ArrivalTrace t({0, 3, 1, 0, 7});
  std::stringstream ss;
  write_trace(ss, t);
  CHECK(read_trace(ss).counts() == t.counts());

  std::istringstream commented("# header\n1\n\n  # note\n2\n");
  CHECK(read_trace(commented).counts() == std::vector<Count>{1, 2});
  std::istringstream bad("1\n-2\n");
  CHECK_THROWS_AS(read_trace(bad), TraceIoError);
  CHECK_THROWS_AS(read_trace_file("/nonexistent/trace.txt"), TraceIoError);
}
