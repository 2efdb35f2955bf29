#include "maxplus/simulator.hpp"

#include <stdexcept>
#include <string>

#include "maxplus/series.hpp"

namespace maxplus {

namespace {

struct Arc {
  std::size_t from = 0;
  std::size_t to = 0;
  std::int64_t delay = 0;  // event shift (token count)
  Scalar weight;           // date shift (holding time)
};

/// Expands every matrix entry into arcs with delay <= k_max.  Entries must
/// be causal: an arc reading future events has no simulation meaning.
void expand_arcs(const SeriesMatrix& m, std::size_t to_base, std::size_t from_base,
                 std::int64_t k_max, const char* what, std::vector<Arc>& zero,
                 std::vector<Arc>& delayed) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Series& s = m.at(i, j);
      if (s.is_zero()) continue;
      if (s.is_top() || s.min_exp() < 0) {
        throw std::invalid_argument(std::string(what) + " entry (" + std::to_string(i + 1) + "," +
                                    std::to_string(j + 1) + ") is not causal");
      }
      for (const Monomial& mono : support(s, k_max)) {
        const Arc arc{from_base + j, to_base + i, mono.exp, mono.coeff};
        (mono.exp == 0 ? zero : delayed).push_back(arc);
      }
    }
  }
}

/// Least solution of v = M v + drive over events 0..k_max, where M is given
/// as arcs.  Zero-delay arcs are resolved per event by relaxation rounds:
/// values still moving after n rounds sit on or behind a positive-weight
/// zero-delay cycle, so their suprema are unbounded and they saturate to T.
Trajectory least_fixpoint(std::size_t n, const std::vector<Arc>& zero,
                          const std::vector<Arc>& delayed,
                          const std::vector<DaterSlice>& drive, std::int64_t k_max) {
  Trajectory x;
  x.slices.assign(n, DaterSlice(static_cast<std::size_t>(k_max) + 1, Scalar::eps()));
  std::vector<Scalar> cur(n), next(n);
  for (std::int64_t k = 0; k <= k_max; ++k) {
    for (std::size_t i = 0; i < n; ++i) cur[i] = drive[i][static_cast<std::size_t>(k)];
    for (const Arc& a : delayed) {
      if (a.delay > k) continue;
      cur[a.to] = oplus(cur[a.to], otimes(a.weight, x.slices[a.from][static_cast<std::size_t>(k - a.delay)]));
    }
    const auto round = [&] {
      next = cur;
      for (const Arc& a : zero) next[a.to] = oplus(next[a.to], otimes(a.weight, cur[a.from]));
      const bool changed = next != cur;
      cur.swap(next);
      return changed;
    };
    for (std::size_t r = 0; r < n; ++r) {
      if (!round()) break;
    }
    // Detection window: any value still moving within n+1 further rounds is
    // influenced by a positive zero-delay cycle.
    std::vector<bool> divergent(n, false);
    for (std::size_t r = 0; r <= n; ++r) {
      if (!round()) break;
      for (std::size_t i = 0; i < n; ++i) {
        if (cur[i] != next[i]) divergent[i] = true;
      }
    }
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (divergent[i]) {
        cur[i] = Scalar::top();
        any = true;
      }
    }
    if (any) {
      // Saturation spreads along zero-delay arcs in at most n more rounds.
      std::size_t guard = 0;
      while (round()) {
        if (++guard > n + 1) throw std::logic_error("zero-delay relaxation failed to settle");
      }
    }
    for (std::size_t i = 0; i < n; ++i) x.slices[i][static_cast<std::size_t>(k)] = cur[i];
  }
  return x;
}

void check_shape(const Trajectory& t, std::size_t count, std::int64_t k_max, const char* what) {
  if (t.slices.size() != count) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(count) +
                                " slices, got " + std::to_string(t.slices.size()));
  }
  for (const DaterSlice& s : t.slices) {
    if (s.size() != static_cast<std::size_t>(k_max) + 1) {
      throw std::invalid_argument(std::string(what) + ": slice length does not match the horizon");
    }
  }
}

/// drive[i][k] += sum over arcs of weight * input(from, k - delay).
void apply_input(const std::vector<Arc>& arcs, const Trajectory& input, std::size_t offset,
                 std::vector<DaterSlice>& drive) {
  if (drive.empty() || arcs.empty()) return;
  const std::int64_t k_max = static_cast<std::int64_t>(drive.front().size()) - 1;
  for (const Arc& a : arcs) {
    const DaterSlice& in = input.slices[a.from - offset];
    for (std::int64_t k = a.delay; k <= k_max; ++k) {
      Scalar& cell = drive[a.to][static_cast<std::size_t>(k)];
      cell = oplus(cell, otimes(a.weight, in[static_cast<std::size_t>(k - a.delay)]));
    }
  }
}

}  // namespace

Trajectory earliest_state(const SystemMatrices& m, const Trajectory& u, const Trajectory& w,
                          std::int64_t k_max) {
  if (k_max < 0) throw std::invalid_argument("horizon must be nonnegative");
  const std::size_t n = m.a.rows();
  check_shape(u, m.b.cols(), k_max, "input trajectory");
  check_shape(w, m.r.cols(), k_max, "disturbance trajectory");

  std::vector<Arc> zero, delayed, from_u, from_w;
  expand_arcs(m.a, 0, 0, k_max, "state matrix", zero, delayed);
  expand_arcs(m.b, 0, 0, k_max, "input matrix", from_u, from_u);
  expand_arcs(m.r, 0, 0, k_max, "disturbance matrix", from_w, from_w);

  std::vector<DaterSlice> drive(n, DaterSlice(static_cast<std::size_t>(k_max) + 1, Scalar::eps()));
  apply_input(from_u, u, 0, drive);
  apply_input(from_w, w, 0, drive);
  return least_fixpoint(n, zero, delayed, drive, k_max);
}

Trajectory system_output(const SystemMatrices& m, const Trajectory& x) {
  const std::size_t n = m.c.cols();
  if (x.slices.size() != n) throw std::invalid_argument("state trajectory has wrong slice count");
  Trajectory y;
  for (std::size_t i = 0; i < m.c.rows(); ++i) {
    std::optional<std::size_t> pick;
    for (std::size_t j = 0; j < n; ++j) {
      const Series& s = m.c.at(i, j);
      if (s.is_zero()) continue;
      if (s != Series::one() || pick.has_value()) {
        throw std::invalid_argument("output row " + std::to_string(i + 1) +
                                    " does not select a single state");
      }
      pick = j;
    }
    if (!pick) {
      throw std::invalid_argument("output row " + std::to_string(i + 1) +
                                  " does not select a single state");
    }
    y.slices.push_back(x.slices[*pick]);
  }
  return y;
}

Trajectory observer_run(const SystemMatrices& m, const SeriesMatrix& gain, const Trajectory& u,
                        const Trajectory& y, std::int64_t k_max) {
  if (k_max < 0) throw std::invalid_argument("horizon must be nonnegative");
  const std::size_t n = m.a.rows();
  const std::size_t outs = m.c.rows();
  if (gain.rows() != n || gain.cols() != outs) {
    throw std::invalid_argument("observer gain has wrong shape");
  }
  check_shape(u, m.b.cols(), k_max, "input trajectory");
  check_shape(y, outs, k_max, "measured output trajectory");

  // Augmented run over [estimate; estimated output]: the estimated output
  // rows carry C, the correction reads them back through the gain.
  std::vector<Arc> zero, delayed, from_u, from_y;
  expand_arcs(m.a, 0, 0, k_max, "state matrix", zero, delayed);
  expand_arcs(m.c, n, 0, k_max, "output matrix", zero, delayed);
  expand_arcs(gain, 0, n, k_max, "observer gain", zero, delayed);
  expand_arcs(m.b, 0, 0, k_max, "input matrix", from_u, from_u);
  expand_arcs(gain, 0, 0, k_max, "observer gain", from_y, from_y);

  std::vector<DaterSlice> drive(n + outs,
                                DaterSlice(static_cast<std::size_t>(k_max) + 1, Scalar::eps()));
  apply_input(from_u, u, 0, drive);
  apply_input(from_y, y, 0, drive);
  Trajectory full = least_fixpoint(n + outs, zero, delayed, drive, k_max);
  full.slices.resize(n);
  return full;
}

EstimationReport compare_estimation(const Trajectory& x, const Trajectory& x_hat,
                                    const Trajectory& y, const Trajectory& y_hat) {
  if (x.slices.size() != x_hat.slices.size() || y.slices.size() != y_hat.slices.size()) {
    throw std::invalid_argument("trajectory slice counts differ");
  }
  EstimationReport rep;
  rep.lower_bound_ok = true;
  rep.output_equal = (y == y_hat);
  rep.max_gap.assign(x.slices.size(), Scalar::eps());
  for (std::size_t i = 0; i < x.slices.size(); ++i) {
    if (x.slices[i].size() != x_hat.slices[i].size()) {
      throw std::invalid_argument("trajectory horizons differ");
    }
  }
  // Event-major scan so first_violation is the earliest event overall.
  if (!x.slices.empty()) {
    const std::size_t len = x.slices.front().size();
    for (std::size_t k = 0; k < len; ++k) {
      for (std::size_t i = 0; i < x.slices.size(); ++i) {
        const Scalar got = x.slices[i][k], est = x_hat.slices[i][k];
        const Scalar gap = (got == est) ? Scalar::fin(0) : lres(est, got);
        rep.max_gap[i] = oplus(rep.max_gap[i], gap);
        if (!leq(est, got) && !rep.first_violation) {
          rep.first_violation = {i, static_cast<std::int64_t>(k)};
          rep.lower_bound_ok = false;
        }
      }
    }
  }
  if (x.slices.empty() || x.slices.front().empty()) rep.max_gap.assign(x.slices.size(), Scalar::fin(0));
  return rep;
}

}  // namespace maxplus
