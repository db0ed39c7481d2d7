#include "edgecache/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <thread>

#include "edgecache/bounds.hpp"
#include "edgecache/offline.hpp"

namespace edgecache {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& text) {
  // Commas inside parentheses belong to the item: empirical(0.5,0.5).
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (const char ch : text) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& value) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("'" + key + "' expects an integer, got '" + value + "'");
  }
  return v;
}

Rational parse_number(const std::string& key, const std::string& value) {
  try {
    return parse_rational(value);
  } catch (const std::exception& e) {
    throw ConfigError("'" + key + "': " + e.what());
  }
}

}  // namespace

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kNone: return "";
    case SweepAxis::kFetch: return "M";
    case SweepAxis::kRent: return "c";
    case SweepAxis::kKappa: return "kappa";
    case SweepAxis::kArrivalParam: return "p";
    case SweepAxis::kTtl: return "L";
  }
  return "";
}

std::vector<Rational> parse_value_list(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return {};
  if (t.find(':') != std::string::npos) {
    const auto a = t.find(':');
    const auto b = t.find(':', a + 1);
    if (b == std::string::npos) throw ConfigError("range must be start:stop:step, got '" + t + "'");
    const Rational start = parse_number("values", t.substr(0, a));
    const Rational stop = parse_number("values", t.substr(a + 1, b - a - 1));
    const Rational step = parse_number("values", t.substr(b + 1));
    if (step <= 0) throw ConfigError("range step must be positive");
    std::vector<Rational> out;
    for (Rational v = start; v <= stop; v += step) {
      out.push_back(v);
      if (out.size() > 100000) throw ConfigError("range has more than 100000 points");
    }
    return out;
  }
  std::vector<Rational> out;
  for (const auto& item : split_list(t)) out.push_back(parse_number("values", item));
  return out;
}

void ExperimentConfig::set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "policies") {
    policies = split_list(value);
  } else if (key == "M") {
    fetch = parse_number(key, value);
  } else if (key == "c") {
    rent = parse_number(key, value);
  } else if (key == "kappa") {
    kappa = parse_int<Count>(key, value);
  } else if (key == "L") {
    ttl = parse_int<Slot>(key, value);
  } else if (key == "arrivals") {
    arrivals = value;
  } else if (key == "T") {
    horizon = parse_int<std::int64_t>(key, value);
  } else if (key == "seeds" || key == "repetitions") {
    seeds = parse_int<std::int64_t>(key, value);
  } else if (key == "trace") {
    if (value.empty()) {
      trace_path.reset();
    } else {
      trace_path = value;
    }
  } else if (key == "master_seed") {
    master_seed = parse_int<std::uint64_t>(key, value);
  } else if (key == "sweep") {
    if (value.empty() || value == "none") {
      sweep = SweepAxis::kNone;
    } else if (value == "M") {
      sweep = SweepAxis::kFetch;
    } else if (value == "c") {
      sweep = SweepAxis::kRent;
    } else if (value == "kappa") {
      sweep = SweepAxis::kKappa;
    } else if (value == "p" || value == "rate") {
      sweep = SweepAxis::kArrivalParam;
    } else if (value == "L") {
      sweep = SweepAxis::kTtl;
    } else {
      throw ConfigError("unknown sweep axis '" + value + "' (M, c, kappa, p, rate, L)");
    }
  } else if (key == "values") {
    values = parse_value_list(value);
  } else if (key == "threads") {
    threads = parse_int<unsigned>(key, value);
  } else if (key == "output") {
    output = value;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void ExperimentConfig::validate() const {
  if (policies.empty()) throw ConfigError("no policies given");
  if (seeds < 1) throw ConfigError("seeds must be at least 1");
  if (horizon < 0) throw ConfigError("T must be non-negative");
  if (ttl < 1) throw ConfigError("L must be at least 1");
  if (sweep != SweepAxis::kNone && values.empty()) throw ConfigError("sweep axis given without values");
  if (sweep == SweepAxis::kNone && !values.empty()) throw ConfigError("values given without a sweep axis");
  if (sweep == SweepAxis::kArrivalParam && trace_path) throw ConfigError("cannot sweep the arrival rate of a trace file");
  for (const auto& p : policies) {
    if (p == "opt_off" || p == "opt_on_lower" || p == "ttl") continue;
    try {
      PolicySpec::parse(p);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  // Swept parameters are checked per point.
  if (sweep != SweepAxis::kFetch && sweep != SweepAxis::kRent && sweep != SweepAxis::kKappa) {
    try {
      CostParams(fetch, rent, kappa);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  if (!trace_path) {
    try {
      IidDistribution::parse(arrivals);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
}

ExperimentConfig load_config(std::istream& in, ExperimentConfig cfg) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    cfg.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw TraceIoError("cannot open config file '" + path + "'");
  return load_config(in, std::move(base));
}

void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override must be key=value, got '" + assignment + "'");
  cfg.set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

bool ResultRow::operator<(const ResultRow& other) const {
  if (point_index != other.point_index) return point_index < other.point_index;
  return policy < other.policy;
}

std::vector<std::string> result_row_fields() {
  return {"policy",          "sweep_param",     "sweep_value",   "avg_cost_per_slot", "avg_cost_per_slot_exact",
          "service",         "fetch",           "rent",          "num_fetches",       "seeds",
          "opt_off_per_slot", "opt_on_lower",   "rho_rr_upper",  "rho_any_lower",     "rho_ttl_lower",
          "sigma_rr_upper",  "sigma_ttl_lower", "note"};
}

namespace {

struct Point {
  std::size_t index = 0;
  std::string value_text;
  CostParams params{Rational(2), Rational(0), 1};
  std::optional<IidDistribution> dist;
  Slot ttl = 1;
};

struct Entry {
  std::string label;
  // Unset for the opt_off / opt_on_lower pseudo-policies.
  std::optional<PolicySpec> spec;
};

struct Sums {
  Rational service;
  Rational fetch;
  Rational rent;
  std::int64_t fetches = 0;
};

struct PointResult {
  std::vector<Sums> per_entry;
  Sums opt;
  // Pooled trace statistics, used when arrivals come from a file.
  std::int64_t slots = 0;
  std::int64_t arrivals = 0;
  std::int64_t served = 0;
  std::int64_t zeros = 0;
};

std::vector<Entry> entries_for(const ExperimentConfig& cfg, Slot ttl) {
  std::vector<Entry> out;
  for (const auto& p : cfg.policies) {
    if (p == "opt_off" || p == "opt_on_lower") {
      out.push_back({p, std::nullopt});
    } else if (p == "ttl") {
      const PolicySpec spec{PolicyKind::kTtl, ttl};
      out.push_back({spec.name(), spec});
    } else {
      const PolicySpec spec = PolicySpec::parse(p);
      out.push_back({spec.name(), spec});
    }
  }
  return out;
}

std::vector<Point> points_for(const ExperimentConfig& cfg) {
  std::vector<Point> out;
  const std::vector<Rational> values = cfg.sweep == SweepAxis::kNone ? std::vector<Rational>{Rational(0)} : cfg.values;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Rational& v = values[i];
    Rational m = cfg.fetch;
    Rational c = cfg.rent;
    Count kappa = cfg.kappa;
    Slot ttl = cfg.ttl;
    std::string arrivals = cfg.arrivals;
    switch (cfg.sweep) {
      case SweepAxis::kNone: break;
      case SweepAxis::kFetch: m = v; break;
      case SweepAxis::kRent: c = v; break;
      case SweepAxis::kKappa:
      case SweepAxis::kTtl:
        if (v.denominator() != 1) throw ConfigError("sweep values for " + axis_name(cfg.sweep) + " must be integers");
        (cfg.sweep == SweepAxis::kKappa ? kappa : ttl) = v.numerator();
        break;
      case SweepAxis::kArrivalParam: {
        const auto open = arrivals.find('(');
        if (open == std::string::npos || arrivals.compare(0, open, "empirical") == 0) {
          throw ConfigError("sweep p/rate needs bernoulli(...) or poisson(...) arrivals");
        }
        arrivals = arrivals.substr(0, open) + "(" + to_decimal_string(v) + ")";
        break;
      }
    }
    Point pt;
    pt.index = i;
    pt.value_text = cfg.sweep == SweepAxis::kNone ? "" : to_decimal_string(v);
    try {
      pt.params = CostParams(m, c, kappa);
    } catch (const InvalidParams& e) {
      throw ConfigError(std::string(e.what()) + " at sweep value " + pt.value_text);
    }
    if (!cfg.trace_path) pt.dist = IidDistribution::parse(arrivals);
    pt.ttl = ttl;
    out.push_back(std::move(pt));
  }
  return out;
}

void add(Sums& s, const CostLedger& ledger) {
  s.service += ledger.totals.service;
  s.fetch += ledger.totals.fetch;
  s.rent += ledger.totals.rent;
  s.fetches += ledger.num_fetches;
}

std::string join_notes(const std::vector<std::string>& notes) {
  std::string out;
  for (const auto& n : notes) out += (out.empty() ? "" : "; ") + n;
  return out;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<Point> points = points_for(cfg);
  std::optional<ArrivalTrace> file_trace;
  if (cfg.trace_path) file_trace = read_trace_file(*cfg.trace_path);
  const std::int64_t seeds = file_trace ? 1 : cfg.seeds;
  const std::int64_t horizon = file_trace ? static_cast<std::int64_t>(file_trace->horizon()) : cfg.horizon;

  std::vector<std::vector<Entry>> entries;
  for (const auto& pt : points) entries.push_back(entries_for(cfg, pt.ttl));

  std::vector<PointResult> results(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) results[i].per_entry.resize(entries[i].size());

  const std::size_t jobs = points.size() * static_cast<std::size_t>(seeds);
  std::atomic<std::size_t> next{0};
  std::mutex merge;
  std::exception_ptr failure;

  auto worker = [&] {
    while (true) {
      const std::size_t job = next.fetch_add(1);
      if (job >= jobs) return;
      const std::size_t pi = job / static_cast<std::size_t>(seeds);
      const auto seed_index = static_cast<std::uint64_t>(job % static_cast<std::size_t>(seeds));
      try {
        const Point& pt = points[pi];
        const ArrivalTrace trace =
            file_trace ? *file_trace : gen_iid(*pt.dist, horizon, mix_seed(cfg.master_seed, seed_index));
        std::vector<std::optional<CostLedger>> ledgers(entries[pi].size());
        for (std::size_t e = 0; e < entries[pi].size(); ++e) {
          if (entries[pi][e].spec) ledgers[e] = simulate(*entries[pi][e].spec, pt.params, trace);
        }
        const OptOffResult opt = opt_off(trace, pt.params);
        const CostLedger opt_ledger = score(trace, opt.schedule, pt.params, opt.schedule.starts_cached());
        std::int64_t served = 0;
        std::int64_t zeros = 0;
        for (const Count x : trace.counts()) {
          served += served_at_edge(x, pt.params.kappa());
          zeros += x == 0;
        }

        const std::lock_guard<std::mutex> lock(merge);
        PointResult& r = results[pi];
        for (std::size_t e = 0; e < ledgers.size(); ++e) {
          if (ledgers[e]) add(r.per_entry[e], *ledgers[e]);
        }
        add(r.opt, opt_ledger);
        r.slots += static_cast<std::int64_t>(trace.horizon());
        r.arrivals += trace.total();
        r.served += served;
        r.zeros += zeros;
      } catch (...) {
        const std::lock_guard<std::mutex> lock(merge);
        if (!failure) failure = std::current_exception();
        next.store(jobs);
        return;
      }
    }
  };

  unsigned n = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i + 1 < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<ResultRow> rows;
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    const Point& pt = points[pi];
    const PointResult& r = results[pi];
    const std::int64_t slots = r.slots;
    const Rational& c = pt.params.rent_cost();

    std::optional<ArrivalStats> stats;
    std::string stats_note;
    if (pt.dist) {
      stats = pt.dist->stats(pt.params.kappa());
    } else if (slots > 0) {
      const double t = static_cast<double>(slots);
      stats = ArrivalStats{static_cast<double>(r.arrivals) / t, static_cast<double>(r.served) / t,
                           static_cast<double>(r.zeros) / t};
      stats_note = "stats estimated from the trace";
    }

    auto per_slot = [&](const Rational& v) { return slots > 0 ? v / Rational(slots) : Rational(0); };

    for (std::size_t e = 0; e < entries[pi].size(); ++e) {
      const Entry& entry = entries[pi][e];
      ResultRow row;
      row.policy = entry.label;
      row.sweep_param = axis_name(cfg.sweep);
      row.sweep_value = pt.value_text;
      row.point_index = pi;
      row.seeds = seeds;
      row.opt_off_per_slot = per_slot(r.opt.service + r.opt.fetch + r.opt.rent);
      row.rho_rr_upper = rho_rr_upper(pt.params);
      row.rho_any_lower = rho_any_lower(pt.params);
      std::vector<std::string> notes;
      if (!stats_note.empty()) notes.push_back(stats_note);
      if (stats) row.opt_on_lower = opt_on_lower(*stats, pt.params);

      const Sums* sums = nullptr;
      if (entry.label == "opt_off") {
        sums = &r.opt;
      } else if (entry.spec) {
        sums = &r.per_entry[e];
      }
      if (sums) {
        row.service = per_slot(sums->service);
        row.fetch = per_slot(sums->fetch);
        row.rent = per_slot(sums->rent);
        row.avg_cost_per_slot = row.service + row.fetch + row.rent;
        row.num_fetches = static_cast<double>(sums->fetches) / static_cast<double>(seeds);
      } else {
        notes.push_back("lower bound only");
      }

      if (entry.spec) {
        const PolicyKind kind = entry.spec->kind;
        const bool is_rr = kind == PolicyKind::kRetroRenting || kind == PolicyKind::kEfficientRetroRenting;
        const bool is_ttl = kind == PolicyKind::kTtl || kind == PolicyKind::kTtlPseudocode;
        if (is_ttl) {
          try {
            row.rho_ttl_lower = rho_ttl_lower(pt.params, entry.spec->ttl);
          } catch (const BoundDomainError&) {
            notes.push_back("rho_ttl_lower unbounded");
          }
          notes.push_back("fixed-L TTL, not TTL-online");
          if (stats && stats->mu < to_double(c) && stats->nu > 0 && slots / seeds >= 2) {
            row.sigma_ttl_lower = sigma_ttl_lower(*stats, pt.params, slots / seeds);
          }
        }
        if (is_rr && stats) {
          if (stats->mu == to_double(c)) {
            notes.push_back("mu = c: RR matches OPT-ON");
          } else {
            try {
              const SigmaBound s = sigma_rr_upper(pt.params, *stats, slots / seeds);
              row.sigma_rr_upper = s.value;
              if (s.vacuous) notes.push_back("sigma_rr_upper vacuous at this horizon");
            } catch (const std::domain_error& ex) {
              notes.push_back(std::string("sigma_rr_upper n/a: ") + ex.what());
            }
          }
        }
      }
      row.note = join_notes(notes);
      rows.push_back(std::move(row));
    }
  }
  std::stable_sort(rows.begin(), rows.end());
  return rows;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

template <class T>
std::string opt_decimal(const std::optional<T>& v) {
  return v ? to_decimal_string(*v) : std::string();
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  const auto fields = result_row_fields();
  for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i];
  out << '\n';
  for (const auto& r : rows) {
    const std::vector<std::string> cells{
        csv_field(r.policy),
        r.sweep_param,
        r.sweep_value,
        opt_decimal(r.avg_cost_per_slot),
        r.avg_cost_per_slot ? to_exact_string(*r.avg_cost_per_slot) : "",
        r.avg_cost_per_slot ? to_decimal_string(r.service) : "",
        r.avg_cost_per_slot ? to_decimal_string(r.fetch) : "",
        r.avg_cost_per_slot ? to_decimal_string(r.rent) : "",
        r.avg_cost_per_slot ? to_decimal_string(r.num_fetches) : "",
        std::to_string(r.seeds),
        opt_decimal(r.opt_off_per_slot),
        opt_decimal(r.opt_on_lower),
        opt_decimal(r.rho_rr_upper),
        opt_decimal(r.rho_any_lower),
        opt_decimal(r.rho_ttl_lower),
        opt_decimal(r.sigma_rr_upper),
        opt_decimal(r.sigma_ttl_lower),
        csv_field(r.note),
    };
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  }
}

}  // namespace edgecache
