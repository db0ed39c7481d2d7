#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "edgecache/core.hpp"

namespace edgecache {

enum class TieBreak {
  // Among equal-cost continuations take the uncached one.
  kPreferUncached,
  // Minimum cost first, then the largest number of fetches. This is the
  // optimum at fetch cost M - epsilon, the tie-break under which RR's
  // inclusive fetch/evict tests line up with the offline schedule.
  kMostFetches,
};

struct OptOffResult {
  Schedule schedule;
  Rational cost;
  // Some decision had an equal-cost alternative.
  bool ties = false;
};

// Offline optimum by backward induction over (slot, cached) in O(T).
// Starting cached pays M before slot 1; the schedule never fetches at the
// end of the horizon.
OptOffResult opt_off(const ArrivalTrace& trace, const CostParams& params,
                     TieBreak tie_break = TieBreak::kPreferUncached);

class HorizonTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kBruteForceMaxHorizon = 20;

struct BruteForceResult {
  // First minimum in enumeration order (bit t-1 of the mask is r_t).
  OptOffResult best;
  std::size_t optimal_count = 0;
};

// Exhaustive minimum over all 2^T schedules. Test oracle only.
BruteForceResult brute_force_opt(const ArrivalTrace& trace, const CostParams& params);

struct SubFrame {
  Slot first = 0;
  Slot last = -1;
  bool empty() const { return last < first; }
};

struct Frame {
  int index = 0;
  Slot start = 1;
  Slot end = 0;
  // Slot at whose end the offline schedule fetched; 0 means before slot 1.
  // Unset for frame 0.
  std::optional<Slot> opt_fetch_slot;
  std::optional<Slot> opt_evict_slot;
  std::vector<Slot> rr_fetch_slots;
  std::vector<Slot> rr_evict_slots;
  // a: offline cached, RR not; b: both; c: RR only; d: neither.
  std::array<SubFrame, 4> sub{};
  Rational rr_cost;
  // Includes the offline fetch that opened the frame.
  Rational opt_cost;
};

struct FrameDecomposition {
  std::vector<Frame> frames;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Splits [1, T] at the offline fetches and checks the per-frame structure:
// RR is uncached when a frame opens, fetches exactly once no later than the
// offline eviction, evicts exactly once after it (the last frame may end
// first), and C_RR(i) - C_OPT(i) <= 2M + kappa. Frame 0 must see no RR
// fetch and equal costs.
FrameDecomposition decompose_frames(const ArrivalTrace& trace, const Schedule& opt_schedule,
                                    const Schedule& rr_schedule, const CostParams& params);

struct CachedInterval {
  Slot first = 0;
  Slot last = 0;
  // length >= M / (kappa - c)
  bool long_enough = false;
  // sum of min(x, kappa) over the interval >= M + length * c
  bool pays_for_itself = false;

  bool ok() const { return long_enough && pays_for_itself; }
};

struct StructureReport {
  std::vector<CachedInterval> intervals;
  bool ok() const;
  std::vector<std::string> violations() const;
};

StructureReport verify_opt_structure(const ArrivalTrace& trace, const Schedule& opt_schedule, const CostParams& params);
inline StructureReport verify_opt_structure(const ArrivalTrace& trace, const OptOffResult& opt, const CostParams& params) {
  return verify_opt_structure(trace, opt.schedule, params);
}

}  // namespace edgecache
