#include "maxplus/series.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace maxplus {

/// Internal construction of already-canonical series.
class SeriesBuilder {
public:
  static Series raw(std::vector<Monomial> head, std::vector<Monomial> cycle, std::int64_t tau,
                    std::int64_t nu) {
    Series s;
    s.head_ = std::move(head);
    s.cycle_ = std::move(cycle);
    s.tau_ = tau;
    s.nu_ = nu;
    return s;
  }

  static Series all_top() {
    Series s;
    s.top_ = true;
    return s;
  }
};

namespace {

using std::int64_t;

constexpr int64_t kMaxWindow = int64_t(1) << 22;

[[noreturn]] void too_large() { throw std::overflow_error("series operation exceeds size limits"); }

int64_t checked_add(int64_t a, int64_t b) {
  int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) too_large();
  return r;
}

int64_t checked_mul(int64_t a, int64_t b) {
  int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) too_large();
  return r;
}

int64_t lcm64(int64_t a, int64_t b) { return checked_mul(a / std::gcd(a, b), b); }

/// ceil(a / b) for b > 0.
int64_t ceil_div(int64_t a, int64_t b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }

/// coeff shifted by a (possibly negative) date; T is preserved.
Scalar scale(Scalar c, int64_t dt) {
  if (c.is_top() || dt == 0) return c;
  return otimes(c, Scalar::fin(dt));
}

/// Canonical term list: strictly increasing exponents and coefficients, no
/// eps, nothing after a T coefficient.
void sort_reduce(std::vector<Monomial>& v) {
  std::erase_if(v, [](const Monomial& m) { return m.coeff.is_eps(); });
  std::sort(v.begin(), v.end(), [](const Monomial& x, const Monomial& y) {
    if (x.exp != y.exp) return x.exp < y.exp;
    return y.coeff.before(x.coeff);
  });
  std::vector<Monomial> out;
  out.reserve(v.size());
  for (const Monomial& m : v) {
    if (out.empty() || out.back().coeff.before(m.coeff)) out.push_back(m);
  }
  v = std::move(out);
}

Series make_poly(std::vector<Monomial> v) {
  sort_reduce(v);
  return SeriesBuilder::raw(std::move(v), {}, 0, 0);
}

/// Exact canonical terms of s with exponent <= hi.
std::vector<Monomial> expand(const Series& s, int64_t hi) {
  std::vector<Monomial> out;
  for (const Monomial& m : s.transient()) {
    if (m.exp <= hi) out.push_back(m);
  }
  for (const Monomial& m : s.pattern()) {
    if ((hi - m.exp) / s.period_events() + 1 > kMaxWindow) too_large();
    for (int64_t e = m.exp, j = 0; e <= hi; e += s.period_events(), ++j) {
      out.push_back({scale(m.coeff, j * s.period_time()), e});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Monomial& x, const Monomial& y) { return x.exp < y.exp; });
  return out;
}

/// Dense dater values of a sorted reduced term list on [lo, hi].
std::vector<Scalar> bag_window(const std::vector<Monomial>& monos, int64_t lo, int64_t hi) {
  if (hi - lo + 1 > kMaxWindow) too_large();
  std::vector<Scalar> vals(static_cast<std::size_t>(hi - lo + 1), Scalar::eps());
  Scalar cur = Scalar::eps();
  std::size_t next = 0;
  for (int64_t k = lo; k <= hi; ++k) {
    while (next < monos.size() && monos[next].exp <= k) {
      cur = oplus(cur, monos[next].coeff);
      ++next;
    }
    vals[static_cast<std::size_t>(k - lo)] = cur;
  }
  return vals;
}

/// Rebuilds the canonical encoding from an exact term window.
///
/// monos must list every canonical term with exponent <= hi, the dater must
/// satisfy d(k + nu) = d(k) + tau for all k >= from, and hi >= from + 3*nu so
/// that period minimisation and anchor placement can both be certified inside
/// the window.
Series reencode_periodic(std::vector<Monomial> monos, int64_t tau, int64_t nu, int64_t from,
                         int64_t hi) {
  sort_reduce(monos);
  if (monos.empty()) return Series::zero();
  if (monos.back().coeff.is_top()) return SeriesBuilder::raw(std::move(monos), {}, 0, 0);
  assert(tau >= 1 && nu >= 1 && hi >= from + 3 * nu);

  const int64_t lo = std::min(monos.front().exp, from);
  const std::vector<Scalar> vals = bag_window(monos, lo, hi);
  const auto val = [&](int64_t k) { return vals[static_cast<std::size_t>(k - lo)]; };

  // Minimal period: the least nu' (a divisor nu/d with d | gcd(tau, nu))
  // whose affine law holds across the certified range.
  const int64_t g = std::gcd(tau, nu);
  for (int64_t d = g; d >= 2; --d) {
    if (g % d != 0) continue;
    const int64_t t2 = tau / d, n2 = nu / d;
    bool ok = true;
    for (int64_t k = from; ok && k + n2 <= hi; ++k) {
      ok = val(k + n2) == scale(val(k), t2);
    }
    if (ok) {
      tau = t2;
      nu = n2;
      break;
    }
  }

  // Earliest anchor at which the term sequence repeats exactly with shift
  // (tau, nu).  The first term at exponent >= from + nu is a valid anchor;
  // walk it down while the previous term still shifts onto a present term
  // with no foreign term in between.
  std::size_t i = 0;
  while (i < monos.size() && monos[i].exp < from + nu) ++i;
  assert(i < monos.size());
  const auto find_exp = [&](int64_t e) -> std::size_t {
    auto it = std::lower_bound(monos.begin(), monos.end(), e,
                               [](const Monomial& m, int64_t x) { return m.exp < x; });
    return static_cast<std::size_t>(it - monos.begin());
  };
  while (i > 0) {
    const Monomial cand{scale(monos[i - 1].coeff, tau), monos[i - 1].exp + nu};
    const std::size_t at = find_exp(cand.exp);
    if (at >= monos.size() || !(monos[at] == cand)) break;
    if (at + 1 >= monos.size() || monos[at + 1].exp != monos[i].exp + nu) break;
    --i;
  }

  const int64_t anchor = monos[i].exp;
  std::vector<Monomial> head(monos.begin(), monos.begin() + static_cast<std::ptrdiff_t>(i));
  std::vector<Monomial> cycle;
  for (std::size_t j = i; j < monos.size() && monos[j].exp < anchor + nu; ++j) {
    cycle.push_back(monos[j]);
  }
  Series out = SeriesBuilder::raw(std::move(head), std::move(cycle), tau, nu);
  assert(expand(out, hi) == monos);
  return out;
}

/// (sum of core) * (tau g^nu)*, the pure tail anchored at the core.
Series pure_tail(std::vector<Monomial> core, int64_t tau, int64_t nu) {
  sort_reduce(core);
  if (core.empty()) return Series::zero();
  assert(tau >= 1 && nu >= 1);
  if (core.back().coeff.is_top()) {
    // The T term absorbs every exponent past its own, so the tail collapses
    // to a polynomial: finite core terms still repeat until the cutoff.
    const int64_t cut = core.back().exp;
    std::vector<Monomial> monos;
    for (const Monomial& m : core) {
      if (m.coeff.is_top()) {
        monos.push_back(m);
        continue;
      }
      if ((cut - m.exp) / nu + 1 > kMaxWindow) too_large();
      for (int64_t e = m.exp, j = 0; e < cut; e += nu, ++j) {
        monos.push_back({scale(m.coeff, checked_mul(j, tau)), e});
      }
    }
    return make_poly(std::move(monos));
  }
  const int64_t from = core.back().exp;
  const int64_t hi = checked_add(from, 3 * nu);
  std::vector<Monomial> monos;
  for (const Monomial& m : core) {
    for (int64_t e = m.exp, j = 0; e <= hi; e += nu, ++j) {
      monos.push_back({scale(m.coeff, j * tau), e});
    }
  }
  return reencode_periodic(std::move(monos), tau, nu, from, hi);
}

/// Eventual affine law (tau, nu, valid-from) of a finite-coefficient series'
/// dater; polynomials count as flat with period one event.
struct TailDesc {
  int64_t tau = 0;
  int64_t nu = 1;
  int64_t from = 0;
};

TailDesc tail_desc(const Series& s) {
  assert(!s.is_zero() && !s.is_top() && !s.has_top_tail());
  if (s.is_periodic()) return {s.period_time(), s.period_events(), s.pattern().front().exp};
  return {0, 1, s.transient().back().exp};
}

/// -1 / 0 / +1 comparison of asymptotic growth rates tau/nu.
int rate_cmp(const TailDesc& a, const TailDesc& b) {
  const int64_t l = checked_mul(a.tau, b.nu), r = checked_mul(b.tau, a.nu);
  return l < r ? -1 : (l > r ? 1 : 0);
}

/// Least K >= both tail starts with high(k) >= low(k) for every k >= K.
/// Requires rate(high) > rate(low).
int64_t dominance_bound(const Series& low, const Series& high) {
  const TailDesc ld = tail_desc(low), hd = tail_desc(high);
  const int64_t n = lcm64(ld.nu, hd.nu);
  const int64_t delta = checked_mul(hd.tau, n / hd.nu) - checked_mul(ld.tau, n / ld.nu);
  assert(delta > 0);
  const int64_t base = std::max(ld.from, hd.from);
  if (n > kMaxWindow) too_large();
  int64_t blocks = 0;
  for (int64_t o = 0; o < n; ++o) {
    const Scalar gl = low.at(base + o), gh = high.at(base + o);
    if (gl.is_eps()) continue;
    if (!leq(gl, gh)) blocks = std::max(blocks, ceil_div(gl.value() - gh.value(), delta));
  }
  return checked_add(base, checked_mul(n, blocks));
}

std::vector<Monomial> merged_support(const Series& a, const Series& b, int64_t hi) {
  std::vector<Monomial> monos = expand(a, hi);
  const std::vector<Monomial> more = expand(b, hi);
  monos.insert(monos.end(), more.begin(), more.end());
  return monos;
}

Series top_from(int64_t exp) { return make_poly({{Scalar::top(), exp}}); }

}  // namespace

Series Series::top() { return SeriesBuilder::all_top(); }

Series Series::monomial(Scalar coeff, int64_t exp) {
  if (coeff.is_eps()) return Series::zero();
  return make_poly({{coeff, exp}});
}

Series Series::polynomial(std::vector<Monomial> terms) { return make_poly(std::move(terms)); }

Series Series::periodic(std::vector<Monomial> transient, std::vector<Monomial> pattern,
                        int64_t period_time, int64_t period_events) {
  if (period_time < 0 || period_events < 0) {
    throw std::invalid_argument("negative period in series description");
  }
  sort_reduce(pattern);
  if (pattern.empty()) return make_poly(std::move(transient));
  if (period_events == 0) {
    if (period_time == 0) {
      transient.insert(transient.end(), pattern.begin(), pattern.end());
      return make_poly(std::move(transient));
    }
    // Positive dates recur at fixed exponents: the dates diverge there.
    transient.push_back({Scalar::top(), pattern.front().exp});
    return make_poly(std::move(transient));
  }
  if (period_time == 0) {
    // Later copies repeat the same dates and are dominated by the first.
    transient.insert(transient.end(), pattern.begin(), pattern.end());
    return make_poly(std::move(transient));
  }
  return add(make_poly(std::move(transient)),
             pure_tail(std::move(pattern), period_time, period_events));
}

Scalar Series::at(int64_t k) const {
  if (top_) return Scalar::top();
  Scalar best = Scalar::eps();
  for (const Monomial& m : head_) {
    if (m.exp <= k) best = oplus(best, m.coeff);
  }
  for (const Monomial& m : cycle_) {
    if (m.exp <= k) {
      const int64_t j = (k - m.exp) / nu_;
      best = oplus(best, scale(m.coeff, checked_mul(j, tau_)));
    }
  }
  return best;
}

int64_t Series::min_exp() const {
  if (is_zero() || is_top()) throw std::domain_error("min_exp() of eps or the all-T series");
  return head_.empty() ? cycle_.front().exp : head_.front().exp;
}

std::vector<Monomial> support(const Series& s, int64_t max_exp) {
  if (s.is_top()) throw std::domain_error("support() of the all-T series");
  return expand(s, max_exp);
}

Series shift(const Series& s, int64_t dt, int64_t dn) {
  if (s.is_zero() || s.is_top()) return s;
  std::vector<Monomial> head = s.transient(), cycle = s.pattern();
  for (Monomial& m : head) m = {scale(m.coeff, dt), checked_add(m.exp, dn)};
  for (Monomial& m : cycle) m = {scale(m.coeff, dt), checked_add(m.exp, dn)};
  return SeriesBuilder::raw(std::move(head), std::move(cycle), s.period_time(),
                            s.period_events());
}

Series add(const Series& a, const Series& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_top() || b.is_top()) return Series::top();
  if (a.has_top_tail() || b.has_top_tail()) {
    int64_t cut = std::numeric_limits<int64_t>::max();
    if (a.has_top_tail()) cut = a.transient().back().exp;
    if (b.has_top_tail()) cut = std::min(cut, b.transient().back().exp);
    return make_poly(merged_support(a, b, cut));
  }
  const bool pa = a.is_polynomial(), pb = b.is_polynomial();
  if (pa && pb) {
    return make_poly(merged_support(a, b, std::max(a.transient().back().exp,
                                                   b.transient().back().exp)));
  }
  if (pa || pb) {
    const Series& poly = pa ? a : b;
    const Series& per = pa ? b : a;
    const int64_t k0 = dominance_bound(poly, per);
    const int64_t hi = checked_add(k0, 3 * per.period_events());
    return reencode_periodic(merged_support(a, b, hi), per.period_time(), per.period_events(),
                             k0, hi);
  }
  const TailDesc ta = tail_desc(a), tb = tail_desc(b);
  const int cmp = rate_cmp(ta, tb);
  if (cmp == 0) {
    const int64_t nu = lcm64(ta.nu, tb.nu);
    const int64_t tau = checked_mul(ta.tau, nu / ta.nu);
    const int64_t from = std::max(ta.from, tb.from);
    const int64_t hi = checked_add(from, 3 * nu);
    return reencode_periodic(merged_support(a, b, hi), tau, nu, from, hi);
  }
  const Series& dom = cmp > 0 ? a : b;
  const Series& low = cmp > 0 ? b : a;
  const int64_t k0 = dominance_bound(low, dom);
  const int64_t hi = checked_add(k0, 3 * dom.period_events());
  return reencode_periodic(merged_support(a, b, hi), dom.period_time(), dom.period_events(), k0,
                           hi);
}

Series meet(const Series& a, const Series& b) {
  if (a.is_zero() || b.is_zero()) return Series::zero();
  if (a.is_top()) return b;
  if (b.is_top()) return a;

  bool poly_result = true;
  int64_t tau = 0, nu = 1, from = 0, hi = 0;
  const bool ta = a.has_top_tail(), tb = b.has_top_tail();
  const bool qa = a.is_periodic(), qb = b.is_periodic();
  if (ta && tb) {
    hi = std::max(a.transient().back().exp, b.transient().back().exp);
  } else if ((ta && !qb) || (tb && !qa)) {
    const Series& t = ta ? a : b;
    const Series& p = ta ? b : a;
    hi = std::max(t.transient().back().exp, p.transient().back().exp);
  } else if (ta || tb) {
    const Series& t = ta ? a : b;
    const Series& per = ta ? b : a;
    poly_result = false;
    tau = per.period_time();
    nu = per.period_events();
    from = std::max(t.transient().back().exp, per.pattern().front().exp);
    hi = checked_add(from, 3 * nu);
  } else if (!qa && !qb) {
    hi = std::max(a.transient().back().exp, b.transient().back().exp);
  } else if (!qa || !qb) {
    const Series& poly = qa ? b : a;
    const Series& per = qa ? a : b;
    hi = dominance_bound(poly, per);
  } else {
    const TailDesc da = tail_desc(a), db = tail_desc(b);
    const int cmp = rate_cmp(da, db);
    poly_result = false;
    if (cmp == 0) {
      nu = lcm64(da.nu, db.nu);
      tau = checked_mul(da.tau, nu / da.nu);
      from = std::max(da.from, db.from);
    } else {
      const Series& small = cmp < 0 ? a : b;
      const Series& big = cmp < 0 ? b : a;
      from = dominance_bound(small, big);
      tau = small.period_time();
      nu = small.period_events();
    }
    hi = checked_add(from, 3 * nu);
  }

  const int64_t lo = std::min(a.min_exp(), b.min_exp());
  if (hi < lo) hi = lo;
  std::vector<Monomial> monos;
  Scalar prev = Scalar::eps();
  if (hi - lo + 1 > kMaxWindow) too_large();
  for (int64_t k = lo; k <= hi; ++k) {
    const Scalar v = maxplus::meet(a.at(k), b.at(k));
    if (prev.before(v)) {
      monos.push_back({v, k});
      prev = v;
    }
  }
  if (poly_result) return make_poly(std::move(monos));
  return reencode_periodic(std::move(monos), tau, nu, from, hi);
}

namespace {

std::vector<Monomial> mul_bags(const std::vector<Monomial>& u, const std::vector<Monomial>& v) {
  std::vector<Monomial> out;
  out.reserve(u.size() * v.size());
  for (const Monomial& x : u) {
    for (const Monomial& y : v) {
      out.push_back({otimes(x.coeff, y.coeff), checked_add(x.exp, y.exp)});
    }
  }
  return out;
}

}  // namespace

Series mul(const Series& a, const Series& b) {
  if (a.is_zero() || b.is_zero()) return Series::zero();
  if (a.is_top() || b.is_top()) return Series::top();
  const bool pa = a.is_polynomial(), pb = b.is_polynomial();
  if (pa && pb) return make_poly(mul_bags(a.transient(), b.transient()));
  if (pa || pb) {
    const Series& poly = pa ? a : b;
    const Series& per = pa ? b : a;
    const Series heads = make_poly(mul_bags(poly.transient(), per.transient()));
    const Series tail = pure_tail(mul_bags(poly.transient(), per.pattern()), per.period_time(),
                                  per.period_events());
    return add(heads, tail);
  }
  const TailDesc da = tail_desc(a), db = tail_desc(b);
  const Series& dom = rate_cmp(da, db) >= 0 ? a : b;
  const Series& oth = rate_cmp(da, db) >= 0 ? b : a;
  // r_oth* r_dom* collapses onto r_dom* once oth's pattern has been unrolled
  // dom.nu times: further copies are dominated by stepping dom instead.
  std::vector<Monomial> unroll;
  for (int64_t i = 0; i < dom.period_events(); ++i) {
    unroll.push_back({Scalar::fin(checked_mul(i, oth.period_time())),
                      checked_mul(i, oth.period_events())});
  }
  const Series t1 = make_poly(mul_bags(a.transient(), b.transient()));
  const Series t2 = pure_tail(mul_bags(a.transient(), b.pattern()), b.period_time(),
                              b.period_events());
  const Series t3 = pure_tail(mul_bags(b.transient(), a.pattern()), a.period_time(),
                              a.period_events());
  const Series t4 = pure_tail(mul_bags(mul_bags(a.pattern(), b.pattern()), unroll),
                              dom.period_time(), dom.period_events());
  return add(add(t1, t2), add(t3, t4));
}

namespace {

Series star_monomial(const Monomial& m) {
  if (m.exp < 0) {
    throw std::domain_error("star of a series with negative exponents has no encoding");
  }
  const bool grows = m.coeff.is_top() || m.coeff.value() > 0;
  if (!grows) return Series::one();
  if (m.exp == 0) return top_from(0);
  if (m.coeff.is_top()) return make_poly({{Scalar::unit(), 0}, {Scalar::top(), m.exp}});
  return SeriesBuilder::raw({}, {{Scalar::unit(), 0}}, m.coeff.value(), m.exp);
}

}  // namespace

Series star(const Series& a) {
  if (a.is_zero()) return Series::one();
  if (a.is_top()) return Series::top();
  if (a.is_polynomial()) {
    // The dioid is commutative, so the star of a sum is the product of the
    // stars of its terms.
    Series out = Series::one();
    for (const Monomial& m : a.transient()) out = mul(out, star_monomial(m));
    return out;
  }
  // star(p + q r*) = star(p) * (e + q star(q) star(r)).
  const Series p = SeriesBuilder::raw(a.transient(), {}, 0, 0);
  const Series q = SeriesBuilder::raw(a.pattern(), {}, 0, 0);
  const Series r_star =
      SeriesBuilder::raw({}, {{Scalar::unit(), 0}}, a.period_time(), a.period_events());
  return mul(star(p), add(Series::one(), mul(mul(q, star(q)), r_star)));
}

Series plus(const Series& a) { return mul(a, star(a)); }

Series lres(const Series& a, const Series& b) {
  if (a.is_zero() || b.is_top()) return Series::top();
  if (a.is_top() || b.is_zero()) return Series::zero();

  Series acc = Series::top();
  for (const Monomial& m : a.transient()) {
    if (m.coeff.is_top()) {
      if (!b.has_top_tail()) return Series::zero();
      acc = meet(acc, top_from(b.transient().back().exp - m.exp));
    } else {
      acc = meet(acc, shift(b, -m.coeff.value(), -m.exp));
    }
  }
  if (!a.is_periodic()) return acc;

  Series c = Series::top();
  for (const Monomial& m : a.pattern()) c = meet(c, shift(b, -m.coeff.value(), -m.exp));
  if (c.is_zero()) return Series::zero();
  assert(!c.is_top());

  const int64_t nu = a.period_events(), tau = a.period_time();
  int64_t folds = 0;
  if (c.has_top_tail()) {
    folds = ceil_div(std::max<int64_t>(0, c.transient().back().exp - c.min_exp()), nu) + 1;
  } else if (c.is_polynomial()) {
    // Constant tail divided by a growing pattern: no finite date works.
    return Series::zero();
  } else {
    const TailDesc dc = tail_desc(c);
    if (rate_cmp(dc, {tau, nu, 0}) < 0) return Series::zero();
    folds = ceil_div(std::max<int64_t>(0, dc.from - c.min_exp()), nu) + lcm64(nu, dc.nu) / nu;
  }
  if (folds > kMaxWindow) too_large();
  for (int64_t j = 0; j <= folds; ++j) {
    acc = meet(acc, shift(c, checked_mul(-j, tau), checked_mul(-j, nu)));
  }
  return acc;
}

Series rres(const Series& b, const Series& a) { return lres(a, b); }

bool leq(const Series& a, const Series& b) { return add(a, b) == b; }

SlopeValue slope_of(const Series& s) {
  if (s.is_zero()) return {SlopeValue::Kind::undefined, 0, 0};
  if (s.is_top() || s.has_top_tail()) return {SlopeValue::Kind::top, 0, 0};
  if (s.is_polynomial()) return {SlopeValue::Kind::polynomial, 0, 0};
  const int64_t g = std::gcd(s.period_events(), s.period_time());
  return {SlopeValue::Kind::rational, s.period_events() / g, s.period_time() / g};
}

SlopeValue slope(const Series& s) {
  if (s.is_zero()) throw std::domain_error("slope of eps is undefined");
  return slope_of(s);
}

std::vector<Scalar> to_dater(const Series& s, int64_t horizon) {
  if (horizon < 0) throw std::invalid_argument("negative dater horizon");
  if (horizon + 1 > kMaxWindow) too_large();
  std::vector<Scalar> out(static_cast<std::size_t>(horizon + 1));
  for (int64_t k = 0; k <= horizon; ++k) out[static_cast<std::size_t>(k)] = s.at(k);
  return out;
}

DaterEncoding from_dater(const std::vector<Scalar>& slice,
                         std::optional<std::pair<int64_t, int64_t>> hint) {
  const int64_t n = static_cast<int64_t>(slice.size());
  // Validate shape: an eps prefix, then nondecreasing finite dates, then a T
  // suffix.
  int phase = 0;
  Scalar last = Scalar::eps();
  int64_t first_top = -1;
  for (int64_t k = 0; k < n; ++k) {
    const Scalar v = slice[static_cast<std::size_t>(k)];
    if (v.is_eps()) {
      if (phase != 0) throw std::invalid_argument("dater slice decreases to eps");
      continue;
    }
    if (v.is_top()) {
      if (first_top < 0) first_top = k;
      phase = 2;
      continue;
    }
    if (phase == 2) throw std::invalid_argument("dater slice decreases after T");
    if (phase == 1 && v.before(last)) throw std::invalid_argument("dater slice decreases");
    phase = 1;
    last = v;
  }

  std::vector<Monomial> increases;
  Scalar prev = Scalar::eps();
  for (int64_t k = 0; k < n; ++k) {
    const Scalar v = slice[static_cast<std::size_t>(k)];
    if (prev.before(v)) {
      increases.push_back({v, k});
      prev = v;
    }
  }
  if (increases.empty()) return {Series::zero(), true};
  if (first_top >= 0) return {make_poly(std::move(increases)), true};

  const auto affine_from = [&](int64_t tau, int64_t nu) -> std::optional<int64_t> {
    if (2 * nu > n) return std::nullopt;
    int64_t k0 = n - 2 * nu;
    const auto holds = [&](int64_t k) {
      return slice[static_cast<std::size_t>(k + nu)] ==
             scale(slice[static_cast<std::size_t>(k)], tau);
    };
    for (int64_t k = k0; k + nu < n; ++k) {
      if (!holds(k)) return std::nullopt;
    }
    while (k0 > 0 && holds(k0 - 1)) --k0;
    return k0;
  };

  const auto build = [&](int64_t tau, int64_t nu, int64_t k0) -> Series {
    if (tau == 0) return make_poly(std::move(increases));
    // Extend the slice by its affine law d(k) = d(k - nu) + tau far enough
    // for re-encoding, then hand over the increase points.
    const int64_t hi = std::max(checked_add(k0, 3 * nu), n - 1);
    std::vector<Scalar> ext(slice.begin(), slice.end());
    for (int64_t k = n; k <= hi; ++k) {
      ext.push_back(scale(ext[static_cast<std::size_t>(k - nu)], tau));
    }
    std::vector<Monomial> monos;
    Scalar cur = Scalar::eps();
    for (int64_t k = 0; k <= hi && k < static_cast<int64_t>(ext.size()); ++k) {
      const Scalar v = ext[static_cast<std::size_t>(k)];
      if (cur.before(v)) {
        monos.push_back({v, k});
        cur = v;
      }
    }
    return reencode_periodic(std::move(monos), tau, nu, k0, hi);
  };

  if (hint) {
    const auto [tau, nu] = *hint;
    if (tau < 0 || nu < 1) throw std::invalid_argument("invalid dater tail hint");
    if (const auto k0 = affine_from(tau, nu)) return {build(tau, nu, *k0), true};
    return {make_poly(std::move(increases)), false};
  }
  for (int64_t nu = 1; 2 * nu <= n; ++nu) {
    const Scalar hiv = slice[static_cast<std::size_t>(n - 1)];
    const Scalar lov = slice[static_cast<std::size_t>(n - 1 - nu)];
    if (!hiv.is_finite() || !lov.is_finite()) continue;
    const int64_t tau = hiv.value() - lov.value();
    if (const auto k0 = affine_from(tau, nu)) return {build(tau, nu, *k0), true};
  }
  return {make_poly(std::move(increases)), false};
}

}  // namespace maxplus
