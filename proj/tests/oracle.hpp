#pragma once

// Test-side reference arithmetic.  Everything here works on plain arrays of
// dater values expanded directly from the canonical fields of a series and
// recomputes each operation from its set-theoretic definition, so agreement
// with the library is independent evidence rather than a round trip through
// the code under test.  Also hosts the seeded random generators shared by the
// property and acceptance suites.

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "maxplus/matrix.hpp"
#include "maxplus/scalar.hpp"
#include "maxplus/series.hpp"
#include "maxplus/simulator.hpp"
#include "maxplus/teg.hpp"

namespace oracle {

using maxplus::Monomial;
using maxplus::Scalar;
using maxplus::Series;
using maxplus::SeriesMatrix;

/// Dater values on a window of consecutive event indices; w[i] is the value
/// at event lo + i for the lo the caller chose (0 unless stated otherwise).
using Win = std::vector<Scalar>;

/// Expands a raw bag of terms plus an optional periodic tail into dater
/// values on [lo, hi] by definition: the value at k is the greatest
/// coefficient among terms with exponent <= k.
inline Win raw_window(std::vector<Monomial> terms, const std::vector<Monomial>& pattern,
                      std::int64_t tau, std::int64_t nu, std::int64_t lo, std::int64_t hi) {
  if (nu > 0) {
    for (const Monomial& m : pattern) {
      if (m.coeff.is_eps()) continue;
      Scalar c = m.coeff;
      for (std::int64_t e = m.exp; e <= hi; e += nu) {
        terms.push_back({c, e});
        c = maxplus::otimes(c, Scalar::fin(tau));
      }
    }
  }
  std::sort(terms.begin(), terms.end(),
            [](const Monomial& x, const Monomial& y) { return x.exp < y.exp; });
  Win w(static_cast<std::size_t>(hi - lo + 1), Scalar::eps());
  Scalar best = Scalar::eps();
  std::size_t p = 0;
  for (std::int64_t k = lo; k <= hi; ++k) {
    while (p < terms.size() && terms[p].exp <= k) best = best + terms[p++].coeff;
    w[static_cast<std::size_t>(k - lo)] = best;
  }
  return w;
}

/// Dater window of a series, read off its canonical fields (never through
/// at() or to_dater()).
inline Win window(const Series& s, std::int64_t lo, std::int64_t hi) {
  if (s.is_top()) return Win(static_cast<std::size_t>(hi - lo + 1), Scalar::top());
  return raw_window(s.transient(), s.pattern(), s.period_time(), s.period_events(), lo, hi);
}

inline Win window(const Series& s, std::int64_t hi) { return window(s, 0, hi); }

inline Win add_w(const Win& a, const Win& b) {
  Win c(std::min(a.size(), b.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

inline Win meet_w(const Win& a, const Win& b) {
  Win c(std::min(a.size(), b.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = maxplus::meet(a[i], b[i]);
  return c;
}

inline bool leq_w(const Win& a, const Win& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    if (!maxplus::leq(a[i], b[i])) return false;
  return true;
}

/// Dater convolution; exact on [0, hi] for series supported on [0, +inf).
inline Win mul_w(const Win& a, const Win& b) {
  Win c(std::min(a.size(), b.size()), Scalar::eps());
  for (std::size_t k = 0; k < c.size(); ++k)
    for (std::size_t i = 0; i <= k; ++i) c[k] = c[k] + maxplus::otimes(a[i], b[k - i]);
  return c;
}

/// Expected product window. The all-T series carries every exponent,
/// negative ones included, so its product with anything nonzero is all T and
/// plain convolution on [0, hi] does not apply to it.
inline Win prod_w(const Series& a, const Series& b, std::int64_t hi) {
  const auto len = static_cast<std::size_t>(hi + 1);
  if (a.is_zero() || b.is_zero()) return Win(len, Scalar::eps());
  if (a.is_top() || b.is_top()) return Win(len, Scalar::top());
  return mul_w(window(a, hi), window(b, hi));
}

/// Kleene star by accumulating partial sums e + a + a^2 + ...; a strictly
/// positive (or T) date at event 0 repeats without bound, everything else
/// stabilises within the window.
inline Win star_w(const Win& a) {
  const std::size_t n = a.size();
  if (n == 0) return {};
  if (a[0].is_top() || (a[0].is_finite() && a[0].value() > 0)) return Win(n, Scalar::top());
  const Win e(n, Scalar::unit());
  Win acc = e;
  for (std::size_t it = 0; it < n + 3; ++it) {
    Win next = add_w(e, mul_w(acc, a));
    if (next == acc) return acc;
    acc = std::move(next);
  }
  throw std::logic_error("star_w failed to stabilise");
}

/// Upper bound on the greatest x with a*x <= b, sampled on [lo, hi]:
/// x(k) = min over j < a.size() of b(k + j) - a(j), with b supported on
/// [0, +inf) and covered by its window up to hi + a.size() - 1.  Truncating j
/// can only raise the result, so two runs with growing a-windows that agree
/// have converged to the true residual at that event.
inline Win scan_lres(const Win& a, const Win& b, std::int64_t lo, std::int64_t hi) {
  Win x(static_cast<std::size_t>(hi - lo + 1), Scalar::top());
  for (std::int64_t k = lo; k <= hi; ++k) {
    Scalar v = Scalar::top();
    for (std::size_t j = 0; j < a.size(); ++j) {
      const std::int64_t t = k + static_cast<std::int64_t>(j);
      if (t >= static_cast<std::int64_t>(b.size())) break;  // beyond b's window: unknown
      const Scalar bt = t < 0 ? Scalar::eps() : b[static_cast<std::size_t>(t)];
      v = maxplus::meet(v, maxplus::lres(a[j], bt));
    }
    x[static_cast<std::size_t>(k - lo)] = v;
  }
  return x;
}

// ---------------------------------------------------------------------------
// Matrix windows.

/// w[i][j] is the window of entry (i, j).
using MWin = std::vector<std::vector<Win>>;

inline MWin m_window(const SeriesMatrix& m, std::int64_t hi) {
  MWin w(m.rows(), std::vector<Win>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) w[i][j] = window(m.at(i, j), hi);
  return w;
}

inline MWin m_id_w(std::size_t n, std::size_t len) {
  MWin w(n, std::vector<Win>(n, Win(len, Scalar::eps())));
  for (std::size_t i = 0; i < n; ++i) w[i][i] = Win(len, Scalar::unit());
  return w;
}

inline MWin m_add_w(const MWin& a, const MWin& b) {
  MWin c(a.size(), std::vector<Win>(a[0].size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) c[i][j] = add_w(a[i][j], b[i][j]);
  return c;
}

inline MWin m_mul_w(const MWin& a, const MWin& b) {
  const std::size_t r = a.size(), n = b.size(), q = b[0].size(), len = a[0][0].size();
  MWin c(r, std::vector<Win>(q, Win(len, Scalar::eps())));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < q; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][k] = add_w(c[i][k], mul_w(a[i][j], b[j][k]));
  return c;
}

/// Entrywise expected window of a matrix product, assembled from prod_w so
/// all-T entries keep their full support.
inline MWin m_prod_w(const SeriesMatrix& a, const SeriesMatrix& b, std::int64_t hi) {
  const auto len = static_cast<std::size_t>(hi + 1);
  MWin c(a.rows(), std::vector<Win>(b.cols(), Win(len, Scalar::eps())));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < b.cols(); ++k)
      for (std::size_t j = 0; j < a.cols(); ++j)
        c[i][k] = add_w(c[i][k], prod_w(a.at(i, j), b.at(j, k), hi));
  return c;
}

/// Matrix star by partial sums; callers must feed matrices whose entries all
/// carry exponents >= 1 so A^i vanishes on the window once i exceeds it.
inline MWin m_star_w(const MWin& a) {
  const std::size_t n = a.size(), len = a[0][0].size();
  const MWin id = m_id_w(n, len);
  MWin acc = id;
  for (std::size_t it = 0; it < len + 3; ++it) {
    MWin next = m_add_w(id, m_mul_w(acc, a));
    if (next == acc) return acc;
    acc = std::move(next);
  }
  throw std::logic_error("m_star_w failed to stabilise");
}

// ---------------------------------------------------------------------------
// Seeded random generators.

struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}
  std::int64_t in(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(g);
  }
  double real() { return std::uniform_real_distribution<double>(0.0, 1.0)(g); }
};

inline Scalar rnd_scalar(Rng& r, double peps = 0.15, double ptop = 0.1) {
  const double u = r.real();
  if (u < peps) return Scalar::eps();
  if (u < peps + ptop) return Scalar::top();
  return Scalar::fin(r.in(-3, 12));
}

inline Series rnd_poly(Rng& r) {
  std::vector<Monomial> t;
  for (std::int64_t i = r.in(0, 4); i > 0; --i) t.push_back({Scalar::fin(r.in(-3, 12)), r.in(0, 8)});
  if (r.real() < 0.12) t.push_back({Scalar::top(), r.in(0, 9)});
  return Series::polynomial(std::move(t));
}

inline Series rnd_periodic(Rng& r) {
  std::vector<Monomial> head;
  for (std::int64_t i = r.in(0, 3); i > 0; --i) head.push_back({Scalar::fin(r.in(-3, 9)), r.in(0, 6)});
  const std::int64_t nu = r.in(1, 3), tau = r.in(1, 6);
  std::vector<Monomial> pat;
  for (std::int64_t i = r.in(1, 2); i > 0; --i) pat.push_back({Scalar::fin(r.in(0, 9)), r.in(0, nu - 1)});
  return Series::periodic(std::move(head), std::move(pat), tau, nu);
}

/// Mixed bag: eps, top, polynomials (possibly with a T tail), periodic.
inline Series rnd_series(Rng& r) {
  const double u = r.real();
  if (u < 0.08) return Series::zero();
  if (u < 0.12) return Series::top();
  if (u < 0.50) return rnd_poly(r);
  return rnd_periodic(r);
}

/// Series with finite dates and every exponent >= 1 (possibly eps); matrices
/// of these have stars with finite dates everywhere.
inline Series rnd_ge1_series(Rng& r) {
  std::vector<Monomial> head;
  for (std::int64_t i = r.in(0, 2); i > 0; --i) head.push_back({Scalar::fin(r.in(0, 9)), r.in(1, 5)});
  if (r.real() < 0.5) return Series::polynomial(std::move(head));
  const std::int64_t nu = r.in(1, 3), tau = r.in(1, 6);
  std::vector<Monomial> pat{{Scalar::fin(r.in(0, 9)), r.in(1, nu)}};
  return Series::periodic(std::move(head), std::move(pat), tau, nu);
}

inline SeriesMatrix rnd_matrix(Rng& r, std::size_t rows, std::size_t cols) {
  SeriesMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = rnd_series(r);
  return m;
}

inline SeriesMatrix rnd_star_matrix(Rng& r, std::size_t n) {
  SeriesMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (r.real() < 0.55) m.at(i, j) = rnd_ge1_series(r);
  return m;
}

/// Random event-graph system in matrix form: A with monomial entries whose
/// token counts are >= 1 (no zero-token circuit can arise), structural B and
/// C without shared rows/columns, and R = identity so every state can be
/// disturbed directly.
struct RandomSystem {
  maxplus::SystemMatrices m;
  std::size_t states = 0, inputs = 0, outputs = 0;
};

inline RandomSystem rnd_system(Rng& r) {
  RandomSystem s;
  const std::size_t n = static_cast<std::size_t>(r.in(2, 5));
  const std::size_t p = static_cast<std::size_t>(r.in(1, 2));
  const std::size_t q = static_cast<std::size_t>(r.in(1, std::min<std::int64_t>(2, static_cast<std::int64_t>(n))));
  s.states = n;
  s.inputs = p;
  s.outputs = q;
  s.m.a = SeriesMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (r.real() < 0.45) s.m.a.at(i, j) = Series::monomial(Scalar::fin(r.in(0, 9)), r.in(1, 2));
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), r.g);
  s.m.b = SeriesMatrix(n, p);
  for (std::size_t c = 0; c < p; ++c) s.m.b.at(idx[c], c) = Series::one();
  std::shuffle(idx.begin(), idx.end(), r.g);
  s.m.c = SeriesMatrix(q, n);
  for (std::size_t row = 0; row < q; ++row) s.m.c.at(row, idx[row]) = Series::one();
  s.m.r = SeriesMatrix::identity(n);
  return s;
}

/// One nondecreasing finite date slice per transition, events 0..len-1.
inline maxplus::Trajectory rnd_traj(Rng& r, std::size_t cols, std::size_t len,
                                    std::int64_t start_hi = 5, std::int64_t step_hi = 4) {
  maxplus::Trajectory t;
  t.slices.assign(cols, maxplus::DaterSlice(len));
  for (std::size_t c = 0; c < cols; ++c) {
    std::int64_t cur = r.in(0, start_hi);
    for (std::size_t k = 0; k < len; ++k) {
      t.slices[c][k] = Scalar::fin(cur);
      cur += r.in(0, step_hi);
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Rational slope comparisons (times are strictly positive).

inline bool frac_less(std::int64_t e1, std::int64_t t1, std::int64_t e2, std::int64_t t2) {
  return e1 * t2 < e2 * t1;
}
inline bool frac_eq(std::int64_t e1, std::int64_t t1, std::int64_t e2, std::int64_t t2) {
  return e1 * t2 == e2 * t1;
}

}  // namespace oracle
