#include "edgecache/arrivals.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace edgecache {

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master ^ index;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

IidDistribution IidDistribution::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidDistribution("bernoulli p must lie in [0, 1]");
  return IidDistribution(Kind::kBernoulli, p, {});
}

IidDistribution IidDistribution::poisson(double rate) {
  if (!(rate >= 0.0)) throw InvalidDistribution("poisson rate must be non-negative");
  if (rate > 700.0) throw InvalidDistribution("poisson rate above 700 is not supported by inversion sampling");
  return IidDistribution(Kind::kPoisson, rate, {});
}

IidDistribution IidDistribution::empirical(std::vector<double> table) {
  if (table.empty()) throw InvalidDistribution("empirical table is empty");
  double sum = 0.0;
  for (const double p : table) {
    if (!(p >= 0.0)) throw InvalidDistribution("empirical probabilities must be non-negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InvalidDistribution("empirical probabilities must sum to 1");
  return IidDistribution(Kind::kEmpirical, 0.0, std::move(table));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

double require_double(std::string_view s, const char* what) {
  const auto v = parse_double(s);
  if (!v) throw InvalidDistribution(std::string("cannot parse ") + what + " '" + std::string(s) + "'");
  return *v;
}

}  // namespace

IidDistribution IidDistribution::parse(std::string_view text) {
  text = trim(text);
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw InvalidDistribution("expected bernoulli(p), poisson(rate) or empirical(p0,p1,...), got '" +
                              std::string(text) + "'");
  }
  const std::string_view name = trim(text.substr(0, open));
  const std::string_view args = text.substr(open + 1, text.size() - open - 2);
  if (name == "bernoulli") return bernoulli(require_double(args, "bernoulli p"));
  if (name == "poisson") return poisson(require_double(args, "poisson rate"));
  if (name == "empirical") {
    std::vector<double> table;
    std::size_t start = 0;
    while (start <= args.size()) {
      const auto comma = args.find(',', start);
      const auto end = comma == std::string_view::npos ? args.size() : comma;
      table.push_back(require_double(args.substr(start, end - start), "probability"));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return empirical(std::move(table));
  }
  throw InvalidDistribution("unknown distribution '" + std::string(name) + "'");
}

double IidDistribution::nu() const {
  switch (kind_) {
    case Kind::kBernoulli:
    case Kind::kPoisson:
      return param_;
    case Kind::kEmpirical: {
      double s = 0.0;
      for (std::size_t x = 0; x < table_.size(); ++x) s += static_cast<double>(x) * table_[x];
      return s;
    }
  }
  return 0.0;
}

double IidDistribution::mu(Count kappa) const {
  switch (kind_) {
    case Kind::kBernoulli:
      return param_;
    case Kind::kPoisson: {
      // E[min(X, k)] = k - sum_{x<k} (k - x) P(X = x); finite, no tail to cut.
      double px = std::exp(-param_);
      double deficit = 0.0;
      for (Count x = 0; x < kappa; ++x) {
        deficit += static_cast<double>(kappa - x) * px;
        px *= param_ / static_cast<double>(x + 1);
      }
      return static_cast<double>(kappa) - deficit;
    }
    case Kind::kEmpirical: {
      double s = 0.0;
      for (std::size_t x = 0; x < table_.size(); ++x) {
        s += static_cast<double>(served_at_edge(static_cast<Count>(x), kappa)) * table_[x];
      }
      return s;
    }
  }
  return 0.0;
}

double IidDistribution::p0() const {
  switch (kind_) {
    case Kind::kBernoulli:
      return 1.0 - param_;
    case Kind::kPoisson:
      return std::exp(-param_);
    case Kind::kEmpirical:
      return table_.front();
  }
  return 0.0;
}

ArrivalStats IidDistribution::stats(Count kappa) const { return {nu(), mu(kappa), p0()}; }

Count IidDistribution::sample(Rng& rng) const {
  const double u = uniform01(rng);
  switch (kind_) {
    case Kind::kBernoulli:
      return u < param_ ? 1 : 0;
    case Kind::kPoisson: {
      Count x = 0;
      double px = std::exp(-param_);
      double cum = px;
      // Past the mode px only shrinks, so rounding in cum cannot loop forever.
      while (u >= cum && px > 0.0) {
        ++x;
        px *= param_ / static_cast<double>(x);
        cum += px;
      }
      return x;
    }
    case Kind::kEmpirical: {
      double cum = 0.0;
      for (std::size_t x = 0; x < table_.size(); ++x) {
        cum += table_[x];
        if (u < cum) return static_cast<Count>(x);
      }
      // u landed in the rounding gap above the last cumulative value.
      for (std::size_t x = table_.size(); x-- > 0;) {
        if (table_[x] > 0.0) return static_cast<Count>(x);
      }
      return 0;
    }
  }
  return 0;
}

std::string IidDistribution::describe() const {
  std::ostringstream os;
  os.precision(12);
  switch (kind_) {
    case Kind::kBernoulli:
      os << "bernoulli(" << param_ << ")";
      break;
    case Kind::kPoisson:
      os << "poisson(" << param_ << ")";
      break;
    case Kind::kEmpirical:
      os << "empirical(";
      for (std::size_t i = 0; i < table_.size(); ++i) os << (i ? "," : "") << table_[i];
      os << ")";
      break;
  }
  return os.str();
}

ArrivalTrace gen_iid(const IidDistribution& dist, std::int64_t horizon, std::uint64_t seed) {
  if (horizon < 0) throw std::invalid_argument("horizon must be non-negative");
  Rng rng(seed);
  std::vector<Count> counts(static_cast<std::size_t>(horizon));
  for (auto& x : counts) x = dist.sample(rng);
  return ArrivalTrace(std::move(counts));
}

Theorem2Attack adversary_theorem2(Policy policy, const CostParams& params, std::int64_t horizon_cap) {
  if (horizon_cap < 1) throw std::invalid_argument("horizon cap must be at least one slot");
  const Policy fresh = policy;
  const Count kappa = params.kappa();
  const auto cap = static_cast<std::size_t>(horizon_cap);
  const Rational& fetch = params.fetch_cost();
  const Rational& rent = params.rent_cost();

  Theorem2Attack out;
  out.started_cached = policy.cached();
  std::vector<Count> counts;

  if (!out.started_cached) {
    while (counts.size() < cap) {
      counts.push_back(kappa);
      if (policy.step(kappa)) {
        out.switch_slot = static_cast<Slot>(counts.size());
        break;
      }
    }
    if (out.switch_slot == 0) {
      out.non_reactive = true;
      out.alt_cost = rent * Rational(horizon_cap) + fetch;
    } else {
      // Silence until the policy gives the service up again.
      while (counts.size() < cap) {
        counts.push_back(0);
        if (!policy.step(0)) break;
      }
      out.alt_cost = rent * Rational(out.switch_slot) + fetch;
    }
  } else {
    while (counts.size() + 1 < cap) {
      counts.push_back(0);
      if (!policy.step(0)) {
        out.switch_slot = static_cast<Slot>(counts.size());
        break;
      }
    }
    out.non_reactive = out.switch_slot == 0;
    counts.push_back(kappa);
    out.alt_cost = fetch + rent;
  }

  out.trace = ArrivalTrace(std::move(counts));
  const Schedule schedule = run_policy(fresh, out.trace);
  out.policy_cost = score(out.trace, schedule, params, schedule.starts_cached()).totals.total;
  return out;
}

TtlBranch ttl_branch(const CostParams& params, Slot ttl) {
  const Rational& m = params.fetch_cost();
  const Rational& c = params.rent_cost();
  if (Rational(params.kappa()) < m + c) return TtlBranch::kSmallBurst;
  return Rational(ttl) * c > m ? TtlBranch::kLongHold : TtlBranch::kShortHold;
}

std::vector<TtlConstruction> adversary_ttl(const CostParams& params, Slot ttl, std::int64_t repetitions) {
  if (ttl < 1) throw std::invalid_argument("TTL value must be at least one slot");
  if (repetitions < 1) throw std::invalid_argument("need at least one repetition");
  const Count kappa = params.kappa();
  const Rational& m = params.fetch_cost();
  const Rational& c = params.rent_cost();
  const auto quiet = static_cast<std::size_t>(ttl);

  std::vector<TtlConstruction> out;

  std::vector<Count> single(quiet + 2, 0);
  single.front() = 1;
  out.push_back({TtlBranch::kSmallBurst, "single-request", ArrivalTrace(std::move(single)), Rational(1)});

  std::vector<Count> burst(quiet + 2, 0);
  burst.front() = kappa;
  out.push_back({TtlBranch::kLongHold, "burst", ArrivalTrace(std::move(burst)), m + c});

  // The comparison schedule stays cached from the first burst to the last.
  std::vector<Count> periodic;
  periodic.reserve(static_cast<std::size_t>(repetitions) * (quiet + 1));
  for (std::int64_t i = 0; i < repetitions; ++i) {
    periodic.push_back(kappa);
    periodic.insert(periodic.end(), quiet, 0);
  }
  const Rational cached_slots((repetitions - 1) * ttl + repetitions);
  out.push_back({TtlBranch::kShortHold, "periodic", ArrivalTrace(std::move(periodic)), m + cached_slots * c});
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

std::optional<std::size_t> as_index(const std::string& column) {
  if (column.empty()) return std::nullopt;
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(column.data(), column.data() + column.size(), v);
  if (ec != std::errc() || ptr != column.data() + column.size()) return std::nullopt;
  return v;
}

}  // namespace

IngestResult bin_timestamps(std::vector<double> timestamps, std::optional<double> slot_duration,
                            std::int64_t max_slots) {
  if (slot_duration && !(*slot_duration > 0.0 && std::isfinite(*slot_duration))) {
    throw std::invalid_argument("slot duration must be positive");
  }
  IngestResult out;
  out.events = static_cast<std::int64_t>(timestamps.size());
  std::sort(timestamps.begin(), timestamps.end());

  double width = 1.0;
  if (slot_duration) {
    width = *slot_duration;
  } else {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < timestamps.size(); ++i) {
      const double d = timestamps[i] - timestamps[i - 1];
      if (d > 0.0) gap = std::min(gap, d);
    }
    // Slightly under the smallest gap so division rounding cannot merge a pair.
    if (std::isfinite(gap)) width = gap * (1.0 - 1e-9);
  }
  out.slot_duration = width;
  if (timestamps.empty()) return out;

  const double base = std::floor(timestamps.front() / width);
  const double span = std::floor(timestamps.back() / width) - base + 1.0;
  if (span > static_cast<double>(max_slots)) {
    throw std::invalid_argument("slot duration yields " + to_decimal_string(span) + " slots, above the limit of " +
                                std::to_string(max_slots));
  }
  std::vector<Count> counts(static_cast<std::size_t>(span), 0);
  for (const double ts : timestamps) {
    ++counts[static_cast<std::size_t>(std::floor(ts / width) - base)];
  }
  out.trace = ArrivalTrace(std::move(counts));
  return out;
}

IngestResult ingest_trace(const TraceIngestConfig& cfg) {
  std::ifstream in(cfg.path);
  if (!in) throw TraceIoError("cannot open trace file '" + cfg.path + "'");
  if (cfg.filter && cfg.filter_column.empty()) throw std::invalid_argument("a filter needs a filter column");

  std::optional<std::size_t> ts_col = as_index(cfg.timestamp_column);
  std::optional<std::size_t> filter_col = cfg.filter ? as_index(cfg.filter_column) : std::nullopt;
  const bool header = !ts_col || (cfg.filter && !filter_col);

  std::vector<double> timestamps;
  std::int64_t skipped = 0;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split(line, cfg.delimiter);
    if (first && header) {
      first = false;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string name = unquote(fields[i]);
        if (!ts_col && name == cfg.timestamp_column) ts_col = i;
        if (cfg.filter && !filter_col && name == cfg.filter_column) filter_col = i;
      }
      if (!ts_col) throw std::invalid_argument("no column named '" + cfg.timestamp_column + "'");
      if (cfg.filter && !filter_col) throw std::invalid_argument("no column named '" + cfg.filter_column + "'");
      continue;
    }
    first = false;
    if (*ts_col >= fields.size() || (filter_col && *filter_col >= fields.size())) {
      ++skipped;
      continue;
    }
    if (cfg.filter && unquote(fields[*filter_col]) != *cfg.filter) continue;
    const auto ts = parse_double(fields[*ts_col]);
    if (!ts) {
      ++skipped;
      continue;
    }
    timestamps.push_back(*ts);
  }
  if (in.bad()) throw TraceIoError("read error on '" + cfg.path + "'");

  IngestResult out = bin_timestamps(std::move(timestamps), cfg.slot_duration, cfg.max_slots);
  out.skipped_rows = skipped;
  return out;
}

void write_trace(std::ostream& out, const ArrivalTrace& trace) {
  for (const Count x : trace.counts()) out << x << '\n';
}

ArrivalTrace read_trace(std::istream& in) {
  std::vector<Count> counts;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    Count x = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size() || x < 0) {
      throw TraceIoError("line " + std::to_string(lineno) + ": expected a non-negative count, got '" +
                         std::string(s) + "'");
    }
    counts.push_back(x);
  }
  return ArrivalTrace(std::move(counts));
}

ArrivalTrace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TraceIoError("cannot open trace file '" + path + "'");
  return read_trace(in);
}

}  // namespace edgecache
