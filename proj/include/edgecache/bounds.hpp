#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "edgecache/core.hpp"

namespace edgecache {

class BoundDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InfeasibleHorizon : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Competitive-ratio upper bound for RetroRenting: 3 + (kappa - c)/M - 2c/kappa.
Rational rho_rr_upper(const CostParams& params);

// Lower bound for every deterministic online policy:
// 1 + kappa/(c + M) if kappa >= c(c + M)/M, else kappa/c.
Rational rho_any_lower(const CostParams& params);

// Lower bound on the TTL competitive ratio: 1 + Lc + M if kappa < M + c,
// else (kappa + Lc + M)/(c + min{Lc, M}). Throws when that is unbounded (c = 0).
Rational rho_ttl_lower(const CostParams& params, Slot ttl);

// Hoeffding-based per-slot gaps between RR and the online optimum.
// f needs mu > c > 0, g needs mu < c; both need lambda > 1.
double f_bound(const CostParams& params, const ArrivalStats& stats, double lambda);
double g_bound(const CostParams& params, const ArrivalStats& stats, double lambda);

// Log-spaced search grid for the free parameter lambda in (1, max].
struct LambdaGrid {
  double max = 64.0;
  int points = 256;
  std::vector<double> values() const;
};

struct SigmaBound {
  double value = 0.0;
  double lambda = 0.0;
  // value < 1: the expression says nothing at this horizon.
  bool vacuous = false;
};

// Minimises the finite-horizon ratio bound over lambda with
// T > ceil(lambda M / |mu - c|): one grid pass and one refinement between the
// neighbours of the best point.
SigmaBound sigma_rr_upper(const CostParams& params, const ArrivalStats& stats, std::int64_t horizon,
                          const LambdaGrid& grid = {});

// The bound at a single lambda; throws InfeasibleHorizon when T is too short.
double sigma_rr_upper_at(const CostParams& params, const ArrivalStats& stats, std::int64_t horizon, double lambda);

namespace detail {

template <class Num>
Num as_num(const Rational& r) {
  if constexpr (std::is_same_v<Num, Rational>) {
    return r;
  } else {
    return static_cast<Num>(to_double(r));
  }
}

template <class Num>
Num power(Num base, std::int64_t exponent) {
  Num out(1);
  for (std::int64_t i = 0; i < exponent; ++i) out *= base;
  return out;
}

template <class Num>
Num min_of(const Num& a, const Num& b) {
  return b < a ? b : a;
}

template <class Num>
void require_low_rate(const BasicArrivalStats<Num>& stats, const CostParams& params) {
  if (!(stats.mu < as_num<Num>(params.rent_cost()))) {
    throw BoundDomainError("TTL stochastic bounds hold only for mu < c");
  }
}

}  // namespace detail

// Per-slot lower bound on the online optimum: min{c + nu - mu, nu}.
template <class Num>
Num opt_on_lower(const BasicArrivalStats<Num>& stats, const CostParams& params) {
  const Num c = detail::as_num<Num>(params.rent_cost());
  return detail::min_of<Num>(c + stats.nu - stats.mu, stats.nu);
}

// E[C_t^TTL] - E[C_t^OPT-ON] for mu < c:
// p0^m (1 - p0) M + (1 - p0^m)(c - mu), m = min{t - 1, L}.
template <class Num>
Num ttl_delta(const BasicArrivalStats<Num>& stats, const CostParams& params, Slot ttl, Slot t) {
  detail::require_low_rate(stats, params);
  if (t < 1 || ttl < 1) throw BoundDomainError("ttl_delta needs t >= 1 and L >= 1");
  const Num fetch = detail::as_num<Num>(params.fetch_cost());
  const Num c = detail::as_num<Num>(params.rent_cost());
  const Num held = detail::power(stats.p0, std::min<Slot>(t - 1, ttl));
  return held * (Num(1) - stats.p0) * fetch + (Num(1) - held) * (c - stats.mu);
}

// (1 - 1/T) min{(1 - p0)(p0 M + c - mu), c - mu} / nu for mu < c.
template <class Num>
Num sigma_ttl_lower(const BasicArrivalStats<Num>& stats, const CostParams& params, std::int64_t horizon) {
  detail::require_low_rate(stats, params);
  if (horizon < 2) throw BoundDomainError("sigma_ttl_lower needs T >= 2");
  if (!(stats.nu > Num(0))) throw BoundDomainError("sigma_ttl_lower needs nu > 0");
  const Num fetch = detail::as_num<Num>(params.fetch_cost());
  const Num c = detail::as_num<Num>(params.rent_cost());
  const Num gap = c - stats.mu;
  const Num per_slot = detail::min_of<Num>((Num(1) - stats.p0) * (stats.p0 * fetch + gap), gap);
  return (Num(1) - Num(1) / Num(horizon)) * per_slot / stats.nu;
}

}  // namespace edgecache
