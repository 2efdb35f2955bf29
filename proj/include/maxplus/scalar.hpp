#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>

namespace maxplus {

/// Element of the complete (max,+) semiring over the integers.
///
/// Carries one of three states: the bottom element eps (-inf, the additive
/// neutral and multiplicative absorber), a finite integer date, or the top
/// element T (+inf).  Sum is max, product is integer addition, and the
/// complete-dioid convention eps * T = eps holds.
class Scalar {
public:
  /// eps by default, so value-initialised storage is the zero matrix.
  constexpr Scalar() = default;

  static constexpr Scalar eps() { return Scalar(kEps); }
  static constexpr Scalar top() { return Scalar(kTop); }
  /// Multiplicative unit (date 0).
  static constexpr Scalar unit() { return Scalar(0); }

  /// Finite date.  The two sentinel words are rejected so that every state
  /// has exactly one representation.
  static constexpr Scalar fin(std::int64_t v) {
    if (v == kEps || v == kTop) throw std::overflow_error("scalar date out of range");
    return Scalar(v);
  }

  constexpr bool is_eps() const { return v_ == kEps; }
  constexpr bool is_top() const { return v_ == kTop; }
  constexpr bool is_finite() const { return v_ != kEps && v_ != kTop; }

  constexpr std::int64_t value() const {
    if (!is_finite()) throw std::domain_error("value() on eps or T");
    return v_;
  }

  friend constexpr bool operator==(Scalar, Scalar) = default;

  /// Natural (total) order eps < finite dates < T; coincides with the dioid
  /// order a <= b  iff  a + b == b.
  constexpr bool before(Scalar o) const { return v_ < o.v_; }

private:
  static constexpr std::int64_t kEps = std::numeric_limits<std::int64_t>::min();
  static constexpr std::int64_t kTop = std::numeric_limits<std::int64_t>::max();

  constexpr explicit Scalar(std::int64_t v) : v_(v) {}

  std::int64_t v_ = kEps;
};

/// Sum: max under the natural order.
constexpr Scalar oplus(Scalar a, Scalar b) { return a.before(b) ? b : a; }

/// Greatest lower bound: min under the natural order.
constexpr Scalar meet(Scalar a, Scalar b) { return a.before(b) ? a : b; }

constexpr bool leq(Scalar a, Scalar b) { return oplus(a, b) == b; }

/// Product: date addition.  eps absorbs everything, including T; otherwise T
/// absorbs.  Finite sums are overflow-checked.
constexpr Scalar otimes(Scalar a, Scalar b) {
  if (a.is_eps() || b.is_eps()) return Scalar::eps();
  if (a.is_top() || b.is_top()) return Scalar::top();
  std::int64_t r = 0;
  if (__builtin_add_overflow(a.value(), b.value(), &r)) throw std::overflow_error("scalar product overflow");
  return Scalar::fin(r);
}

/// Left residual a \ b: the greatest x with a*x <= b.
constexpr Scalar lres(Scalar a, Scalar b) {
  if (a.is_eps() || b.is_top()) return Scalar::top();
  if (a.is_top() || b.is_eps()) return Scalar::eps();
  std::int64_t r = 0;
  if (__builtin_sub_overflow(b.value(), a.value(), &r)) throw std::overflow_error("scalar residual overflow");
  return Scalar::fin(r);
}

/// Right residual b / a: the greatest x with x*a <= b.  The product is
/// commutative, so the two residuals agree; both spellings are kept for the
/// matrix layer, where they differ.
constexpr Scalar rres(Scalar b, Scalar a) { return lres(a, b); }

constexpr Scalar operator+(Scalar a, Scalar b) { return oplus(a, b); }
constexpr Scalar operator*(Scalar a, Scalar b) { return otimes(a, b); }

}  // namespace maxplus
