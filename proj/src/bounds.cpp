#include "edgecache/bounds.hpp"

#include <cmath>
#include <limits>

namespace edgecache {

Rational rho_rr_upper(const CostParams& params) {
  const Rational& m = params.fetch_cost();
  const Rational& c = params.rent_cost();
  const Rational kappa(params.kappa());
  return Rational(3) + (kappa - c) / m - Rational(2) * c / kappa;
}

Rational rho_any_lower(const CostParams& params) {
  const Rational& m = params.fetch_cost();
  const Rational& c = params.rent_cost();
  const Rational kappa(params.kappa());
  if (kappa >= c * (c + m) / m) return Rational(1) + kappa / (c + m);
  return kappa / c;
}

Rational rho_ttl_lower(const CostParams& params, Slot ttl) {
  if (ttl < 1) throw BoundDomainError("TTL value must be at least one slot");
  const Rational& m = params.fetch_cost();
  const Rational& c = params.rent_cost();
  const Rational kappa(params.kappa());
  const Rational hold = Rational(ttl) * c;
  if (kappa < m + c) return Rational(1) + hold + m;
  // c = 0: TTL keeps paying for fetches that free rent would avoid.
  if (c == Rational(0)) throw BoundDomainError("TTL ratio is unbounded for c = 0 and kappa >= M");
  return (kappa + hold + m) / (c + std::min(hold, m));
}

namespace {

struct Inputs {
  double m;
  double c;
  double kappa;
  double mu;
  double nu;
};

Inputs inputs(const CostParams& params, const ArrivalStats& stats) {
  return {to_double(params.fetch_cost()), to_double(params.rent_cost()), static_cast<double>(params.kappa()),
          stats.mu, stats.nu};
}

void require_lambda(double lambda) {
  if (!(lambda > 1.0)) throw BoundDomainError("lambda must exceed 1");
}

double warmup(double lambda, double m, double gap) { return std::ceil(lambda * m / gap); }

}  // namespace

double f_bound(const CostParams& params, const ArrivalStats& stats, double lambda) {
  require_lambda(lambda);
  const Inputs in = inputs(params, stats);
  if (in.mu == in.c) throw BoundDomainError("mu = c: RR matches the online optimum");
  if (!(in.mu > in.c)) throw BoundDomainError("f needs mu > c");
  if (!(in.c > 0)) throw BoundDomainError("f needs c > 0");
  const double gap = in.mu - in.c;
  const double k2 = in.kappa * in.kappa;
  const double head = warmup(lambda, in.m, gap) * std::exp(-2.0 * gap * gap * (in.m / in.c) / k2) /
                      -std::expm1(-2.0 * gap * gap / k2);
  const double tail = std::exp(-2.0 * (lambda - 1.0) * (lambda - 1.0) * in.m * gap / (lambda * k2));
  return (in.m + in.mu) * (head + tail);
}

double g_bound(const CostParams& params, const ArrivalStats& stats, double lambda) {
  require_lambda(lambda);
  const Inputs in = inputs(params, stats);
  if (in.mu == in.c) throw BoundDomainError("mu = c: RR matches the online optimum");
  if (!(in.mu < in.c)) throw BoundDomainError("g needs mu < c");
  const double gap = in.c - in.mu;
  const double k2 = in.kappa * in.kappa;
  const double head = 2.0 * warmup(lambda, in.m, gap) *
                      std::exp(-2.0 * gap * gap * (in.m / (in.kappa - in.c)) / k2) /
                      -std::expm1(-2.0 * gap * gap / k2);
  const double tail = std::exp(-2.0 * (lambda - 1.0) * (lambda - 1.0) * gap * in.m / (lambda * k2));
  return (in.c + in.m) * (head + tail);
}

std::vector<double> LambdaGrid::values() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(points));
  const double top = std::log(max);
  for (int i = 1; i <= points; ++i) out.push_back(std::exp(top * i / points));
  return out;
}

double sigma_rr_upper_at(const CostParams& params, const ArrivalStats& stats, std::int64_t horizon, double lambda) {
  require_lambda(lambda);
  const Inputs in = inputs(params, stats);
  if (in.mu == in.c) throw BoundDomainError("mu = c: RR matches the online optimum");
  const double t = static_cast<double>(horizon);
  const double w = warmup(lambda, in.m, std::abs(in.mu - in.c));
  if (!(t > w)) throw InfeasibleHorizon("T must exceed ceil(lambda M / |mu - c|)");
  if (in.mu > in.c) {
    const double opt = in.c + in.nu - in.mu;
    return 1.0 - w * ((in.m + in.c + in.nu) / opt + 1.0) / t + (t - w) / (t * opt) * f_bound(params, stats, lambda);
  }
  if (!(in.nu > 0)) throw BoundDomainError("sigma needs nu > 0");
  return 1.0 - w * ((in.m + in.c + in.nu) / in.nu + 1.0) / t + (t - w) / (t * in.nu) * g_bound(params, stats, lambda);
}

SigmaBound sigma_rr_upper(const CostParams& params, const ArrivalStats& stats, std::int64_t horizon,
                          const LambdaGrid& grid) {
  const std::vector<double> lambdas = grid.values();
  SigmaBound best{std::numeric_limits<double>::infinity(), 0.0, false};
  std::size_t best_index = lambdas.size();
  auto consider = [&](double lambda) {
    try {
      const double v = sigma_rr_upper_at(params, stats, horizon, lambda);
      if (v < best.value) {
        best.value = v;
        best.lambda = lambda;
        return true;
      }
    } catch (const InfeasibleHorizon&) {
    }
    return false;
  };
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (consider(lambdas[i])) best_index = i;
  }
  if (best_index == lambdas.size()) {
    throw InfeasibleHorizon("no lambda in the grid satisfies T > ceil(lambda M / |mu - c|)");
  }
  const double lo = best_index == 0 ? 1.0 : lambdas[best_index - 1];
  const double hi = best_index + 1 < lambdas.size() ? lambdas[best_index + 1] : lambdas[best_index];
  const double span = std::log(hi / lo);
  for (int i = 1; i < grid.points; ++i) consider(lo * std::exp(span * i / grid.points));
  best.vacuous = best.value < 1.0;
  return best;
}

}  // namespace edgecache
