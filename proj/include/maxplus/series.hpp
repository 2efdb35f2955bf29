#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "maxplus/scalar.hpp"

namespace maxplus {

/// One term t*g^n of a formal power series in the event-shift g: the n-th
/// event happens no earlier than date t.  coeff is never eps; a coeff of T
/// marks the point from which the series is everywhere T.
struct Monomial {
  Scalar coeff;
  std::int64_t exp = 0;

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Ultimately periodic series p + q*(r)* where p and q are polynomials and
/// r = period_time * g^period_events, kept in a canonical form so that
/// structural equality coincides with equality of the underlying daters
/// (series are identified modulo the running-max closure).
///
/// Canonical invariants:
///  - transient() then pattern() listed with strictly increasing exponents
///    and strictly increasing coefficients (no dominated term survives);
///  - polynomial series (including the everywhere-eventually-T ones, which
///    end in a single T term) have an empty pattern and period 0/0;
///  - proper periodic series have period_time >= 1, period_events >= 1,
///    minimal among all equivalent encodings, a nonempty pattern spanning
///    fewer than period_events exponents, and the earliest pattern anchor
///    for which the monomial sequence repeats exactly with that shift;
///  - the all-T series has its own encoding (is_top()).
class Series {
public:
  /// eps: the empty series.
  Series() = default;

  static Series zero() { return Series(); }
  static Series one() { return monomial(Scalar::unit(), 0); }
  /// T at every event index, including negative ones.
  static Series top();
  static Series monomial(Scalar coeff, std::int64_t exp);
  /// Canonicalises an arbitrary bag of terms (sum semantics).
  static Series polynomial(std::vector<Monomial> terms);
  /// Canonicalises transient + pattern*(period_time g^period_events)*.
  /// period_events = 0 with period_time = 0 encodes "no tail".
  static Series periodic(std::vector<Monomial> transient, std::vector<Monomial> pattern,
                         std::int64_t period_time, std::int64_t period_events);

  bool is_zero() const { return !top_ && head_.empty() && cycle_.empty(); }
  bool is_top() const { return top_; }
  /// Finite support or a T tail; everything except proper periodic and top.
  bool is_polynomial() const { return !top_ && cycle_.empty(); }
  bool has_top_tail() const { return !head_.empty() && head_.back().coeff.is_top(); }
  bool is_periodic() const { return !cycle_.empty(); }

  const std::vector<Monomial>& transient() const { return head_; }
  const std::vector<Monomial>& pattern() const { return cycle_; }
  std::int64_t period_time() const { return tau_; }
  std::int64_t period_events() const { return nu_; }

  /// Dater value at event index k: the latest date among terms with
  /// exponent <= k, eps when there is none.
  Scalar at(std::int64_t k) const;

  /// Least exponent carrying a term.  Undefined on eps and top.
  std::int64_t min_exp() const;

  friend bool operator==(const Series&, const Series&) = default;

private:
  friend class SeriesBuilder;

  std::vector<Monomial> head_;
  std::vector<Monomial> cycle_;
  std::int64_t tau_ = 0;
  std::int64_t nu_ = 0;
  bool top_ = false;
};

Series add(const Series& a, const Series& b);
Series mul(const Series& a, const Series& b);
Series meet(const Series& a, const Series& b);

/// Kleene star e + a + a^2 + ...  Throws std::domain_error when the closure
/// has no ultimately periodic encoding (a term with negative exponent).
Series star(const Series& a);
/// a + a^2 + ... = a * star(a).
Series plus(const Series& a);

/// Left residual a \ b: the greatest series x with a*x <= b.
Series lres(const Series& a, const Series& b);
/// Right residual b / a: the greatest series x with x*a <= b.
Series rres(const Series& b, const Series& a);

bool leq(const Series& a, const Series& b);

/// Shifts every term by dt in date and dn in exponent (product with a
/// monomial of possibly negative date and exponent).
Series shift(const Series& s, std::int64_t dt, std::int64_t dn);

/// Exact list of canonical terms with exponent <= max_exp (pattern copies
/// spelled out).  Throws std::domain_error on the all-T series.
std::vector<Monomial> support(const Series& s, std::int64_t max_exp);

/// Asymptotic growth classification.
///  - undefined: eps (no events at all);
///  - polynomial: finitely many events, all finitely dated;
///  - rational: ultimately periodic tail, events() per time() asymptotically;
///  - top: the tail is everywhere T (the series stops being finitely dated).
struct SlopeValue {
  enum class Kind { undefined, polynomial, rational, top };

  Kind kind = Kind::undefined;
  std::int64_t events = 0;
  std::int64_t time = 0;

  friend bool operator==(const SlopeValue&, const SlopeValue&) = default;
};

/// Total version: eps maps to the undefined marker.
SlopeValue slope_of(const Series& s);
/// Throwing version (std::domain_error on eps).
SlopeValue slope(const Series& s);

/// Dater values at event indices 0..horizon.
std::vector<Scalar> to_dater(const Series& s, std::int64_t horizon);

struct DaterEncoding {
  Series series;
  /// True when the encoding reproduces the slice and extends it with a
  /// detected (or hinted) periodic tail; false when the series is only the
  /// truncation of the slice to a polynomial.
  bool exact = false;
};

/// Smallest canonical series agreeing with the slice on 0..size-1.  Entries
/// must be nondecreasing where finite, eps only as a prefix, T only as a
/// suffix; otherwise std::invalid_argument.  The hint, when given, names a
/// tail (period_time, period_events) to validate and use.
DaterEncoding from_dater(const std::vector<Scalar>& slice,
                         std::optional<std::pair<std::int64_t, std::int64_t>> hint = std::nullopt);

inline Series operator+(const Series& a, const Series& b) { return add(a, b); }
inline Series operator*(const Series& a, const Series& b) { return mul(a, b); }

}  // namespace maxplus
