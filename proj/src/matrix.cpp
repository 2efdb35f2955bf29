#include "maxplus/matrix.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace maxplus {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

SeriesMatrix add(const SeriesMatrix& a, const SeriesMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix sum shape mismatch");
  SeriesMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = add(a.at(i, j), b.at(i, j));
  }
  return out;
}

SeriesMatrix meet(const SeriesMatrix& a, const SeriesMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix meet shape mismatch");
  SeriesMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = meet(a.at(i, j), b.at(i, j));
  }
  return out;
}

SeriesMatrix mul(const SeriesMatrix& a, const SeriesMatrix& b) {
  require(a.cols() == b.rows(), "matrix product shape mismatch");
  SeriesMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Series acc;
      for (std::size_t k = 0; k < a.cols(); ++k) {
        acc = add(acc, mul(a.at(i, k), b.at(k, j)));
      }
      out.at(i, j) = acc;
    }
  }
  return out;
}

bool leq(const SeriesMatrix& a, const SeriesMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix order shape mismatch");
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (!leq(a.at(i, j), b.at(i, j))) return false;
    }
  }
  return true;
}

SeriesMatrix hconcat(const SeriesMatrix& a, const SeriesMatrix& b) {
  require(a.rows() == b.rows(), "hconcat row mismatch");
  SeriesMatrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) out.at(i, a.cols() + j) = b.at(i, j);
  }
  return out;
}

std::vector<std::vector<SlopeValue>> slopes(const SeriesMatrix& a) {
  std::vector<std::vector<SlopeValue>> out(a.rows(), std::vector<SlopeValue>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out[i][j] = slope_of(a.at(i, j));
  }
  return out;
}

BlockStructure block_form(const SeriesMatrix& a) {
  require(a.rows() == a.cols(), "block form of a non-square matrix");
  const std::size_t n = a.rows();

  // Successors of j are the rows its column feeds.
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!a.at(i, j).is_zero()) succ[j].push_back(i);
    }
  }

  // Iterative Tarjan.
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kNone), low(n, 0), comp(n, kNone);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t next_index = 0, comp_count = 0;
  struct Frame {
    std::size_t v, child;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kNone) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child < succ[f.v].size()) {
        const std::size_t w = succ[f.v][f.child++];
        if (index[w] == kNone) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        const std::size_t v = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        if (low[v] == index[v]) {
          while (true) {
            const std::size_t w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w] = comp_count;
            if (w == v) break;
          }
          ++comp_count;
        }
      }
    }
  }

  // Component members in original order; the front is the tie-break key.
  std::vector<std::vector<std::size_t>> members(comp_count);
  for (std::size_t v = 0; v < n; ++v) members[comp[v]].push_back(v);

  // Receiving components come first: entry (i, j) != eps orders comp(i)
  // before comp(j).
  std::vector<std::vector<std::size_t>> out_edges(comp_count);
  std::vector<std::size_t> indeg(comp_count, 0);
  for (std::size_t j = 0; j < n; ++j) {
    for (const std::size_t i : succ[j]) {
      if (comp[i] != comp[j]) out_edges[comp[i]].push_back(comp[j]);
    }
  }
  for (auto& es : out_edges) {
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());
    for (const std::size_t c : es) ++indeg[c];
  }

  const auto key = [&](std::size_t c) { return members[c].front(); };
  std::priority_queue<std::pair<std::size_t, std::size_t>,
                      std::vector<std::pair<std::size_t, std::size_t>>, std::greater<>>
      ready;
  for (std::size_t c = 0; c < comp_count; ++c) {
    if (indeg[c] == 0) ready.push({key(c), c});
  }
  BlockStructure bs;
  while (!ready.empty()) {
    const std::size_t c = ready.top().second;
    ready.pop();
    const std::size_t begin = bs.order.size();
    bs.order.insert(bs.order.end(), members[c].begin(), members[c].end());
    bs.blocks.emplace_back(begin, bs.order.size());
    for (const std::size_t d : out_edges[c]) {
      if (--indeg[d] == 0) ready.push({key(d), d});
    }
  }
  return bs;
}

SeriesMatrix star(const SeriesMatrix& a) {
  require(a.rows() == a.cols(), "star of a non-square matrix");
  const std::size_t n = a.rows();
  const BlockStructure bs = block_form(a);

  // Pivot elimination: after processing pivot set S, entry (i, j) sums every
  // nonempty path from j to i whose interior stays in S.
  SeriesMatrix w = a;
  for (const std::size_t k : bs.order) {
    const Series piv = star(w.at(k, k));
    std::vector<Series> row(n), col(n);
    for (std::size_t j = 0; j < n; ++j) row[j] = w.at(k, j);
    for (std::size_t i = 0; i < n; ++i) col[i] = w.at(i, k);
    for (std::size_t i = 0; i < n; ++i) {
      if (col[i].is_zero()) continue;
      const Series left = mul(col[i], piv);
      for (std::size_t j = 0; j < n; ++j) {
        if (row[j].is_zero()) continue;
        w.at(i, j) = add(w.at(i, j), mul(left, row[j]));
      }
    }
  }
  return add(w, SeriesMatrix::identity(n));
}

SeriesMatrix lres(const SeriesMatrix& a, const SeriesMatrix& b) {
  require(a.rows() == b.rows(), "left residual shape mismatch");
  SeriesMatrix out(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.cols(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Series acc = Series::top();
      for (std::size_t k = 0; k < a.rows(); ++k) {
        acc = meet(acc, lres(a.at(k, i), b.at(k, j)));
      }
      out.at(i, j) = acc;
    }
  }
  return out;
}

SeriesMatrix rres(const SeriesMatrix& b, const SeriesMatrix& a) {
  require(b.cols() == a.cols(), "right residual shape mismatch");
  SeriesMatrix out(b.rows(), a.rows());
  for (std::size_t i = 0; i < b.rows(); ++i) {
    for (std::size_t j = 0; j < a.rows(); ++j) {
      Series acc = Series::top();
      for (std::size_t k = 0; k < b.cols(); ++k) {
        acc = meet(acc, rres(b.at(i, k), a.at(j, k)));
      }
      out.at(i, j) = acc;
    }
  }
  return out;
}

}  // namespace maxplus
