#include "maxplus/observer.hpp"

#include <stdexcept>

namespace maxplus {

namespace {

bool component_output_match(const SeriesMatrix& a, const SeriesMatrix& c) {
  const BlockStructure bs = block_form(a);
  std::vector<std::size_t> comp(a.rows(), 0);
  for (std::size_t b = 0; b < bs.blocks.size(); ++b) {
    for (std::size_t t = bs.blocks[b].first; t < bs.blocks[b].second; ++t) comp[bs.order[t]] = b;
  }
  if (c.rows() != bs.blocks.size()) return false;
  std::vector<std::size_t> readers(bs.blocks.size(), 0);
  for (std::size_t i = 0; i < c.rows(); ++i) {
    std::vector<bool> touched(bs.blocks.size(), false);
    for (std::size_t j = 0; j < c.cols(); ++j) {
      if (!c.at(i, j).is_zero()) touched[comp[j]] = true;
    }
    for (std::size_t b = 0; b < bs.blocks.size(); ++b) {
      if (touched[b]) ++readers[b];
    }
  }
  for (const std::size_t r : readers) {
    if (r != 1) return false;
  }
  return true;
}

bool slope_grids_equal(const SeriesMatrix& a, const SeriesMatrix& b) {
  return slopes(a) == slopes(b);
}

}  // namespace

SeriesMatrix observer_gain_u(const TransferMatrices& t) {
  return rres(t.state_from_u, t.output_from_u);
}

SeriesMatrix observer_gain_w(const TransferMatrices& t) {
  return rres(t.state_from_w, t.output_from_w);
}

std::pair<SeriesMatrix, SeriesMatrix> observer_transfer(const SystemMatrices& m,
                                                        const SeriesMatrix& gain) {
  const SeriesMatrix closure = star(add(m.a, mul(gain, m.c)));
  const SeriesMatrix measured = mul(m.c, mul(star(m.a), m.r));
  return {mul(closure, m.b), mul(closure, mul(gain, measured))};
}

std::pair<bool, bool> verify_output_equality(const SystemMatrices& m, const SeriesMatrix& gain) {
  const TransferMatrices t = transfer(m);
  const auto [obs_u, obs_w] = observer_transfer(m, gain);
  return {mul(m.c, obs_u) == t.output_from_u, mul(m.c, obs_w) == t.output_from_w};
}

std::pair<bool, bool> check_slope_recovery(const SystemMatrices& m, const SeriesMatrix& gain) {
  const TransferMatrices t = transfer(m);
  const auto [obs_u, obs_w] = observer_transfer(m, gain);
  const bool precondition = component_output_match(m.a, m.c);
  const bool equal =
      slope_grids_equal(t.state_from_u, obs_u) && slope_grids_equal(t.state_from_w, obs_w);
  return {precondition, equal};
}

bool check_exact_recovery(const SystemMatrices& m) {
  const TransferMatrices t = transfer(m);
  const SeriesMatrix state = hconcat(t.state_from_u, t.state_from_w);
  const SeriesMatrix measured = hconcat(t.output_from_u, t.output_from_w);
  return mul(rres(state, measured), measured) == state;
}

ObserverResult synthesize_observer(const SystemMatrices& m) {
  const TransferMatrices t = transfer(m);
  ObserverResult out{observer_gain_u(t), observer_gain_w(t), {}, {}};
  out.gain = meet(out.gain_u, out.gain_w);

  const SeriesMatrix state = hconcat(t.state_from_u, t.state_from_w);
  const SeriesMatrix measured = hconcat(t.output_from_u, t.output_from_w);
  const SeriesMatrix fused = rres(state, measured);
  if (fused != out.gain) {
    throw std::logic_error("observer gain mismatch between the meet and fused residual routes");
  }

  const SeriesMatrix closure = star(add(m.a, mul(out.gain, m.c)));
  const SeriesMatrix obs_u = mul(closure, m.b);
  const SeriesMatrix obs_w = mul(closure, mul(out.gain, t.output_from_w));

  out.checks.state_from_u_bounded = leq(obs_u, t.state_from_u);
  out.checks.state_from_w_bounded = leq(obs_w, t.state_from_w);
  out.checks.output_from_u_equal = mul(m.c, obs_u) == t.output_from_u;
  out.checks.output_from_w_equal = mul(m.c, obs_w) == t.output_from_w;
  out.checks.component_output_match = component_output_match(m.a, m.c);
  out.checks.slopes_equal =
      slope_grids_equal(t.state_from_u, obs_u) && slope_grids_equal(t.state_from_w, obs_w);
  out.checks.exact_recovery = mul(fused, measured) == state;
  return out;
}

}  // namespace maxplus
