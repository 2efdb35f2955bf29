#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "maxplus/teg.hpp"

namespace maxplus {

/// Dates of firings 0..K of one transition.  eps marks an unconstrained
/// (never-forced) firing, T one that is blocked forever; finite cells are
/// nondecreasing along any trajectory a run produces.
using DaterSlice = std::vector<Scalar>;

/// One dater slice per transition; all slices share the same length K+1.
struct Trajectory {
  std::vector<DaterSlice> slices;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Least solution of x = Ax + Bu + Rw on events 0..k_max: the earliest
/// possible firing dates.  u needs one slice per input, w one per
/// disturbance, each of length k_max+1.  States caught in a cycle whose
/// dates grow without bound come out as T.
Trajectory earliest_state(const SystemMatrices& m, const Trajectory& u, const Trajectory& w,
                          std::int64_t k_max);

/// y = Cx.  Requires the structural shape (every row of C selects exactly
/// one state); throws std::invalid_argument otherwise.
Trajectory system_output(const SystemMatrices& m, const Trajectory& x);

/// Corrected simulation driven by measured outputs: the least solution of
/// x^ = A x^ + B u + L(y^ + y) with y^ = C x^, on events 0..k_max.  Gain
/// entries may be periodic series but must be causal (no negative event
/// shifts, no all-T entries); throws std::invalid_argument otherwise.
Trajectory observer_run(const SystemMatrices& m, const SeriesMatrix& gain, const Trajectory& u,
                        const Trajectory& y, std::int64_t k_max);

struct EstimationReport {
  bool lower_bound_ok = false;  // estimate <= state at every event
  bool output_equal = false;    // estimated output == measured output
  // Per state: the greatest date gap state - estimate over the horizon
  // (0 when they agree everywhere, T when the gap is unbounded).
  std::vector<Scalar> max_gap;
  // Earliest (slice, event) where the estimate exceeds the state, if any.
  std::optional<std::pair<std::size_t, std::int64_t>> first_violation;
};

EstimationReport compare_estimation(const Trajectory& x, const Trajectory& x_hat,
                                    const Trajectory& y, const Trajectory& y_hat);

}  // namespace maxplus
