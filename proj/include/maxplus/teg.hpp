#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "maxplus/matrix.hpp"

namespace maxplus {

/// Error in a timed-event-graph document; `line` is 1-based.
class TegError : public std::runtime_error {
public:
  TegError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// One place (buffer) between two transitions: `tokens` initial marks,
/// `time` units of holding delay.
struct TegPlace {
  std::string from;
  std::string to;
  std::int64_t time = 0;
  std::int64_t tokens = 0;

  friend bool operator==(const TegPlace&, const TegPlace&) = default;
};

/// A timed event graph: named transitions partitioned by role, plus the
/// places connecting them.  Invariants (enforced by parse_teg): names are
/// unique, inputs and disturbances have no incoming place, outputs have no
/// outgoing place, no place links an input or disturbance directly to an
/// output, times and token counts are nonnegative.
struct TegModel {
  std::vector<std::string> states;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<std::string> disturbances;
  std::vector<TegPlace> places;

  friend bool operator==(const TegModel&, const TegModel&) = default;
};

TegModel parse_teg(const std::string& document);
std::string print_teg(const TegModel& model);

/// Event-domain system matrices: x = Ax + Bu + Rw, y = Cx.
struct SystemMatrices {
  SeriesMatrix a;  // n x n, state to state
  SeriesMatrix b;  // n x p, input to state
  SeriesMatrix c;  // m x n, state to output
  SeriesMatrix r;  // n x l, disturbance to state
};

/// Derives A, B, C, R from the model: a place from transition j to
/// transition i with time t and tokens c contributes the monomial t*g^c to
/// the corresponding matrix entry; parallel places combine by max.  When the
/// model declares no disturbances, R defaults to the n x n identity (one
/// independent disturbance per state).
SystemMatrices build_matrices(const TegModel& model);

/// Names for R's columns: the declared disturbances, or synthesized ones
/// ("w1", "w2", ...) matching the identity default of build_matrices.
std::vector<std::string> disturbance_names(const TegModel& model);

/// Checks the structural shape the observer theory assumes: B, C, R entries
/// restricted to {eps, e}; each column of B and R and each row of C has
/// exactly one e; at most one e per row of B and R and per column of C.
/// Returns human-readable violations; empty means valid.
std::vector<std::string> validate_structure(const SystemMatrices& m);

/// Input/output behaviour of the system: x = A*Bu + A*Rw, y = CA*Bu + CA*Rw.
struct TransferMatrices {
  SeriesMatrix a_star;         // closure of the state matrix
  SeriesMatrix state_from_u;   // A*B
  SeriesMatrix state_from_w;   // A*R
  SeriesMatrix output_from_u;  // CA*B
  SeriesMatrix output_from_w;  // CA*R
};

TransferMatrices transfer(const SystemMatrices& m);

}  // namespace maxplus
