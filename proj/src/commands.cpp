#include "edgecache/commands.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "edgecache/bounds.hpp"

namespace edgecache {

std::string run_length_summary(const ArrivalTrace& trace, std::size_t max_runs) {
  std::ostringstream os;
  const auto& x = trace.counts();
  std::size_t runs = 0;
  for (std::size_t i = 0; i < x.size();) {
    std::size_t j = i;
    while (j < x.size() && x[j] == x[i]) ++j;
    if (runs == max_runs) {
      os << " ...";
      break;
    }
    os << (runs ? " " : "") << (j - i) << "x" << x[i];
    ++runs;
    i = j;
  }
  if (x.empty()) os << "(empty)";
  return os.str();
}

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::vector<ResultRow> rows = run_experiment(cfg);
  if (cfg.output == "-" || cfg.output.empty()) {
    write_csv(out, rows);
    return kExitOk;
  }
  std::ofstream file(cfg.output);
  if (!file) {
    err << "cannot write '" << cfg.output << "'\n";
    return kExitIo;
  }
  write_csv(file, rows);
  if (!file) {
    err << "write failed on '" << cfg.output << "'\n";
    return kExitIo;
  }
  err << "wrote " << rows.size() << " rows to " << cfg.output << "\n";
  return kExitOk;
}

int cmd_adversary(const PolicySpec& policy, const CostParams& params, std::int64_t horizon_cap, std::ostream& out) {
  const Theorem2Attack a = adversary_theorem2(Policy(policy, params), params, horizon_cap);
  const EmpiricalRatio ratio = a.ratio();
  const Rational bound = rho_any_lower(params);
  out << "policy          " << policy.name() << "\n";
  out << "params          " << params.describe() << "\n";
  out << "start           " << (a.started_cached ? "cached" : "uncached") << "\n";
  out << (a.started_cached ? "t_evict         " : "t_fetch         ")
      << (a.switch_slot ? std::to_string(a.switch_slot) : std::string("none")) << "\n";
  out << "sequence        T=" << a.trace.horizon() << "  " << run_length_summary(a.trace) << "\n";
  out << "policy cost     " << to_exact_string(a.policy_cost) << " (" << to_decimal_string(a.policy_cost) << ")\n";
  out << "alt cost        " << to_exact_string(a.alt_cost) << " (" << to_decimal_string(a.alt_cost) << ")\n";
  out << "ratio           "
      << (ratio.infinite ? std::string("inf") : to_exact_string(ratio.value) + " (" + to_decimal_string(ratio.value) + ")")
      << "\n";
  out << "rho_any_lower   " << to_exact_string(bound) << " (" << to_decimal_string(bound) << ")\n";
  if (a.non_reactive) out << "flag            non-reactive policy: no switch within the cap\n";
  return kExitOk;
}

namespace {

void row(std::ostream& out, const std::string& name, const std::string& value, const std::string& exact,
         const std::string& inputs) {
  out << std::left << std::setw(18) << name << std::setw(16) << value << std::setw(12) << exact << inputs << "\n";
}

void exact_row(std::ostream& out, const std::string& name, const Rational& v, const std::string& inputs) {
  row(out, name, to_decimal_string(v), to_exact_string(v), inputs);
}

}  // namespace

int cmd_bounds(const CostParams& params, const BoundsRequest& request, std::ostream& out) {
  row(out, "bound", "value", "exact", "inputs");
  const std::string base = params.describe();
  exact_row(out, "rho_rr_upper", rho_rr_upper(params), base);
  exact_row(out, "rho_any_lower", rho_any_lower(params), base);
  if (request.ttl) {
    const std::string with_l = base + " L=" + std::to_string(*request.ttl);
    try {
      exact_row(out, "rho_ttl_lower", rho_ttl_lower(params, *request.ttl), with_l);
    } catch (const BoundDomainError&) {
      row(out, "rho_ttl_lower", "inf", "", with_l);
    }
  }
  if (!request.arrivals) return kExitOk;

  const ArrivalStats stats = request.arrivals->stats(params.kappa());
  std::ostringstream s;
  s << request.arrivals->describe() << " nu=" << to_decimal_string(stats.nu) << " mu=" << to_decimal_string(stats.mu)
    << " p0=" << to_decimal_string(stats.p0);
  const std::string dist = s.str();
  row(out, "opt_on_lower", to_decimal_string(opt_on_lower(stats, params)), "", dist);

  const double c = to_double(params.rent_cost());
  if (stats.mu == c) {
    out << "note: mu = c, RR matches OPT-ON\n";
  } else if (request.horizon) {
    const std::string with_t = dist + " T=" + std::to_string(*request.horizon);
    try {
      const SigmaBound sb = sigma_rr_upper(params, stats, *request.horizon);
      row(out, "sigma_rr_upper", to_decimal_string(sb.value), "",
          with_t + " lambda=" + to_decimal_string(sb.lambda) + (sb.vacuous ? " (vacuous at this horizon)" : ""));
      const bool high = stats.mu > c;
      row(out, high ? "f" : "g",
          to_decimal_string(high ? f_bound(params, stats, sb.lambda) : g_bound(params, stats, sb.lambda)), "",
          "lambda=" + to_decimal_string(sb.lambda));
    } catch (const std::domain_error& e) {
      row(out, "sigma_rr_upper", "n/a", "", e.what());
    }
  }
  if (stats.mu < c && request.ttl) {
    const std::string with_l = dist + " L=" + std::to_string(*request.ttl);
    row(out, "ttl_delta", to_decimal_string(ttl_delta(stats, params, *request.ttl, *request.ttl + 1)), "",
        with_l + " t>L");
    if (request.horizon && *request.horizon >= 2 && stats.nu > 0) {
      row(out, "sigma_ttl_lower", to_decimal_string(sigma_ttl_lower(stats, params, *request.horizon)), "",
          with_l + " T=" + std::to_string(*request.horizon));
    }
  }
  return kExitOk;
}

int cmd_verify(Suite suite, std::int64_t budget, std::uint64_t master_seed, std::ostream& out) {
  const SuiteReport r = run_suite(suite, budget, master_seed);
  out << r.suite << ": " << r.instances << " instances, " << r.failures << " failures\n";
  if (r.ok()) {
    out << "PASS\n";
    return kExitOk;
  }
  out << "first failure: " << r.first_failure << "\n";
  out << "minimized: " << r.counterexample->describe() << "\n";
  out << "FAIL\n";
  return kExitVerifyFailed;
}

int cmd_ingest(const TraceIngestConfig& cfg, std::ostream& out, std::ostream& log) {
  const IngestResult r = ingest_trace(cfg);
  write_trace(out, r.trace);
  Count peak = 0;
  for (const Count x : r.trace.counts()) peak = std::max(peak, x);
  log << "events " << r.events << ", skipped rows " << r.skipped_rows << ", slots " << r.trace.horizon()
      << ", slot duration " << to_decimal_string(r.slot_duration) << ", max per slot " << peak << "\n";
  return kExitOk;
}

}  // namespace edgecache
