#pragma once

#include <utility>

#include "maxplus/teg.hpp"

namespace maxplus {

/// Symbolic validity checks for a synthesized observer gain L.
struct ObserverChecks {
  bool state_from_u_bounded = false;   // (A+LC)*B <= A*B (with equality)
  bool state_from_w_bounded = false;   // (A+LC)*LCA*R <= A*R
  bool output_from_u_equal = false;    // C(A+LC)*B == CA*B
  bool output_from_w_equal = false;    // C(A+LC)*LCA*R == CA*R
  bool component_output_match = false; // each SCC of A is read by exactly one output
  bool slopes_equal = false;           // estimate and state grow at the same rates
  bool exact_recovery = false;         // the estimate reproduces the state exactly

  friend bool operator==(const ObserverChecks&, const ObserverChecks&) = default;
};

struct ObserverResult {
  SeriesMatrix gain_u;  // greatest gain preserving the input-to-state transfer
  SeriesMatrix gain_w;  // greatest gain keeping the correction below the disturbance path
  SeriesMatrix gain;    // their meet: the optimal observer gain
  ObserverChecks checks;
};

/// Greatest L with (A+LC)*B <= A*B, as the residual (A*B) / (CA*B).
SeriesMatrix observer_gain_u(const TransferMatrices& t);

/// Greatest L with (A+LC)*LCA*R <= A*R, as the residual (A*R) / (CA*R).
SeriesMatrix observer_gain_w(const TransferMatrices& t);

/// Full synthesis.  The gain is computed twice -- as the meet of the two
/// single-constraint gains and as one residual over the stacked matrix
/// [B R] -- and both routes must agree (std::logic_error otherwise).  All
/// check fields are filled in.
ObserverResult synthesize_observer(const SystemMatrices& m);

/// Transfers of the corrected simulator: ((A+LC)*B, (A+LC)*LCA*R), the
/// estimate's response to inputs and to disturbances seen through y.
std::pair<SeriesMatrix, SeriesMatrix> observer_transfer(const SystemMatrices& m,
                                                        const SeriesMatrix& gain);

/// (C(A+LC)*B == CA*B, C(A+LC)*LCA*R == CA*R): whether the estimated output
/// reproduces the measured output for every input and every disturbance.
std::pair<bool, bool> verify_output_equality(const SystemMatrices& m, const SeriesMatrix& gain);

/// (precondition, slopes_equal).  The precondition asks the output count to
/// equal the number of strongly connected components of A with each
/// component read by exactly one output; slopes_equal compares entrywise
/// asymptotic growth of (A*B | A*R) against the observer transfer.
std::pair<bool, bool> check_slope_recovery(const SystemMatrices& m, const SeriesMatrix& gain);

/// Image condition ((A*[B R]) / (CA*[B R])) * (CA*[B R]) == A*[B R]; when it
/// holds the observer estimate equals the state for every input pair.
bool check_exact_recovery(const SystemMatrices& m);

}  // namespace maxplus
