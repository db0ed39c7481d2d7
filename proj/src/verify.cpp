#include "edgecache/verify.hpp"

#include <algorithm>
#include <sstream>

#include "edgecache/bounds.hpp"
#include "edgecache/offline.hpp"
#include "edgecache/policies.hpp"

namespace edgecache {

namespace {

std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<double>(hi - lo + 1);
  auto v = lo + static_cast<std::int64_t>(uniform01(rng) * span);
  return v > hi ? hi : v;
}

template <class T, std::size_t N>
T pick(Rng& rng, const T (&items)[N]) {
  return items[uniform_int(rng, 0, N - 1)];
}

std::string schedule_string(const Schedule& s) {
  std::string out;
  for (const bool b : s.cached) out += b ? '1' : '0';
  return out + "|" + (s.cached_after ? '1' : '0');
}

}  // namespace

std::string Instance::describe() const {
  std::ostringstream os;
  os << params.describe() << " source=" << source << " T=" << trace.horizon() << " x=[";
  for (std::size_t i = 0; i < trace.horizon(); ++i) os << (i ? "," : "") << trace.counts()[i];
  os << "]";
  return os.str();
}

CostParams random_params(Rng& rng, Count max_kappa, bool positive_rent) {
  static constexpr std::int64_t kFetchDen[] = {1, 2, 3, 4, 5, 10};
  static constexpr std::int64_t kRentDen[] = {1, 2, 4, 5, 10, 20};
  const Count kappa = uniform_int(rng, 1, max_kappa);
  const std::int64_t fd = pick(rng, kFetchDen);
  const Rational fetch = Rational(1) + Rational(uniform_int(rng, 1, 31 * fd), fd);
  std::int64_t rd = pick(rng, kRentDen);
  // kappa = 1 with d' = 1 leaves only c = 0
  while (positive_rent && kappa * rd < 2) rd = pick(rng, kRentDen);
  std::int64_t j = 0;
  // c = 0 is a boundary worth hitting often.
  if (positive_rent || uniform01(rng) >= 0.1) j = uniform_int(rng, positive_rent ? 1 : 0, kappa * rd - 1);
  return CostParams(fetch, Rational(j, rd), kappa);
}

ArrivalTrace random_trace(Rng& rng, Count kappa, std::int64_t horizon, std::string* source) {
  std::vector<Count> counts(static_cast<std::size_t>(horizon), 0);
  const double k = static_cast<double>(kappa);
  switch (uniform_int(rng, 0, 2)) {
    case 0: {
      const double p = uniform01(rng);
      const Count amplitude = uniform_int(rng, 1, 2 * kappa);
      for (auto& x : counts) x = uniform01(rng) < p ? amplitude : 0;
      if (source) *source = "bernoulli";
      break;
    }
    case 1: {
      const auto dist = IidDistribution::poisson(2.0 * k * uniform01(rng));
      for (auto& x : counts) x = dist.sample(rng);
      if (source) *source = "poisson";
      break;
    }
    default: {
      const auto on = IidDistribution::poisson(k * (0.5 + 1.5 * uniform01(rng)));
      const double enter = 0.02 + 0.3 * uniform01(rng);
      const double leave = 0.02 + 0.3 * uniform01(rng);
      bool active = uniform01(rng) < 0.5;
      for (auto& x : counts) {
        x = active ? on.sample(rng) : (uniform01(rng) < 0.05 ? 1 : 0);
        if (uniform01(rng) < (active ? leave : enter)) active = !active;
      }
      if (source) *source = "bursty";
      break;
    }
  }
  return ArrivalTrace(std::move(counts));
}

Instance random_instance(Rng& rng, std::int64_t min_horizon, std::int64_t max_horizon, Count max_kappa) {
  CostParams params = random_params(rng, max_kappa);
  std::string source;
  ArrivalTrace trace = random_trace(rng, params.kappa(), uniform_int(rng, min_horizon, max_horizon), &source);
  return {params, std::move(trace), source};
}

std::string check_equivalence(const Instance& inst) {
  const Schedule rr = run_policy(PolicySpec{PolicyKind::kRetroRenting, 0}, inst.params, inst.trace);
  const Schedule err = run_policy(PolicySpec{PolicyKind::kEfficientRetroRenting, 0}, inst.params, inst.trace);
  if (rr == err) return {};
  return "RR " + schedule_string(rr) + " vs E-RR " + schedule_string(err);
}

std::string check_oracle(const Instance& inst) {
  const OptOffResult dp = opt_off(inst.trace, inst.params);
  const BruteForceResult bf = brute_force_opt(inst.trace, inst.params);
  if (dp.cost != bf.best.cost) {
    return "DP cost " + to_exact_string(dp.cost) + " vs brute force " + to_exact_string(bf.best.cost);
  }
  const Rational scored = score(inst.trace, dp.schedule, inst.params, dp.schedule.starts_cached()).totals.total;
  if (scored != dp.cost) return "DP schedule scores " + to_exact_string(scored) + ", reported " + to_exact_string(dp.cost);
  const OptOffResult most = opt_off(inst.trace, inst.params, TieBreak::kMostFetches);
  if (most.cost != dp.cost) return "tie-break changed the optimal cost";
  const Rational bf_scored =
      score(inst.trace, bf.best.schedule, inst.params, bf.best.schedule.starts_cached()).totals.total;
  if (bf_scored != bf.best.cost) return "brute-force schedule does not score to its cost";
  for (const char* name : {"rr", "err", "ttl(1)", "ttl(3)", "ttl-alg(2)", "always", "never"}) {
    const Rational c = simulate(PolicySpec::parse(name), inst.params, inst.trace).totals.total;
    if (c < dp.cost) return std::string(name) + " beats the offline optimum: " + to_exact_string(c);
  }
  return {};
}

std::string check_frames(const Instance& inst) {
  const OptOffResult opt = opt_off(inst.trace, inst.params, TieBreak::kMostFetches);
  const Schedule rr = run_policy(PolicySpec{PolicyKind::kRetroRenting, 0}, inst.params, inst.trace);
  const FrameDecomposition d = decompose_frames(inst.trace, opt.schedule, rr, inst.params);
  if (d.ok()) return {};
  std::string out = d.violations.front();
  if (d.violations.size() > 1) out += " (+" + std::to_string(d.violations.size() - 1) + " more)";
  return out;
}

std::string check_structure(const Instance& inst) {
  for (const TieBreak tb : {TieBreak::kMostFetches, TieBreak::kPreferUncached}) {
    const StructureReport r = verify_opt_structure(inst.trace, opt_off(inst.trace, inst.params, tb), inst.params);
    if (!r.ok()) return r.violations().front();
  }
  return {};
}

std::string check_rr_guarantee(const Instance& inst) {
  const Rational rr = simulate(PolicySpec{PolicyKind::kRetroRenting, 0}, inst.params, inst.trace).totals.total;
  const Rational opt = opt_off(inst.trace, inst.params).cost;
  const Rational bound = rho_rr_upper(inst.params);
  if (rr <= bound * opt) return {};
  return "RR cost " + to_exact_string(rr) + " exceeds " + to_exact_string(bound) + " x OPT " + to_exact_string(opt);
}

ArrivalTrace shrink_trace(const ArrivalTrace& trace, const std::function<bool(const ArrivalTrace&)>& fails) {
  std::vector<Count> cur = trace.counts();
  for (std::size_t chunk = cur.size() / 2; chunk >= 1; chunk /= 2) {
    std::size_t start = 0;
    while (start < cur.size()) {
      std::vector<Count> cand;
      cand.reserve(cur.size());
      cand.insert(cand.end(), cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(start));
      const std::size_t stop = std::min(cur.size(), start + chunk);
      cand.insert(cand.end(), cur.begin() + static_cast<std::ptrdiff_t>(stop), cur.end());
      if (fails(ArrivalTrace(cand))) {
        cur = std::move(cand);
      } else {
        start += chunk;
      }
    }
    if (chunk == 1) break;
  }
  return ArrivalTrace(std::move(cur));
}

Suite parse_suite(std::string_view name) {
  if (name == "equivalence") return Suite::kEquivalence;
  if (name == "oracle") return Suite::kOracle;
  if (name == "frames") return Suite::kFrames;
  if (name == "structure") return Suite::kStructure;
  if (name == "bounds-consistency") return Suite::kBoundsConsistency;
  throw std::invalid_argument("unknown suite '" + std::string(name) +
                              "' (equivalence, oracle, frames, structure, bounds-consistency)");
}

std::string suite_name(Suite suite) {
  switch (suite) {
    case Suite::kEquivalence: return "equivalence";
    case Suite::kOracle: return "oracle";
    case Suite::kFrames: return "frames";
    case Suite::kStructure: return "structure";
    case Suite::kBoundsConsistency: return "bounds-consistency";
  }
  return "?";
}

SuiteReport run_suite(Suite suite, std::int64_t budget, std::uint64_t master_seed) {
  SuiteReport report;
  report.suite = suite_name(suite);
  for (std::int64_t i = 0; i < budget; ++i) {
    Rng rng(mix_seed(master_seed, static_cast<std::uint64_t>(i)));
    Instance inst{CostParams(Rational(2), Rational(0), 1), ArrivalTrace(), ""};
    std::function<std::string(const Instance&)> check;
    switch (suite) {
      case Suite::kEquivalence:
        inst = random_instance(rng, 0, 500);
        check = check_equivalence;
        break;
      case Suite::kOracle:
        inst = random_instance(rng, 0, 12);
        check = check_oracle;
        break;
      case Suite::kFrames:
        inst = random_instance(rng, 200, 200);
        check = check_frames;
        break;
      case Suite::kStructure:
        inst = random_instance(rng, 200, 200);
        check = check_structure;
        break;
      case Suite::kBoundsConsistency:
        inst = random_instance(rng, 0, 200);
        check = [](const Instance& in) -> std::string {
          if (rho_rr_upper(in.params) < rho_any_lower(in.params)) {
            return "rho_rr_upper " + to_exact_string(rho_rr_upper(in.params)) + " < rho_any_lower " +
                   to_exact_string(rho_any_lower(in.params));
          }
          return check_rr_guarantee(in);
        };
        break;
    }
    ++report.instances;
    const std::string failure = check(inst);
    if (failure.empty()) continue;
    ++report.failures;
    if (!report.counterexample) {
      Instance small = inst;
      small.trace = shrink_trace(inst.trace, [&](const ArrivalTrace& t) {
        Instance probe = inst;
        probe.trace = t;
        return !check(probe).empty();
      });
      report.first_failure = check(small);
      report.counterexample = std::move(small);
    }
  }
  return report;
}

}  // namespace edgecache
