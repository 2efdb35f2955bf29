#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "maxplus/series.hpp"

namespace maxplus {

/// Dense matrix of series over the (max,+) dioid.  Value-initialised entries
/// are eps, so SeriesMatrix(r, c) is the zero matrix.
class SeriesMatrix {
public:
  SeriesMatrix() = default;
  SeriesMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), e_(rows * cols) {}

  static SeriesMatrix identity(std::size_t n) {
    SeriesMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Series::one();
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Series& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const Series& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

  friend bool operator==(const SeriesMatrix&, const SeriesMatrix&) = default;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Series> e_;
};

SeriesMatrix add(const SeriesMatrix& a, const SeriesMatrix& b);
SeriesMatrix mul(const SeriesMatrix& a, const SeriesMatrix& b);
SeriesMatrix meet(const SeriesMatrix& a, const SeriesMatrix& b);

/// Kleene star of a square matrix, computed by pivot elimination in the
/// component order of block_form.
SeriesMatrix star(const SeriesMatrix& a);

/// Greatest X with a*X <= b (a: n x p, b: n x q, X: p x q).
SeriesMatrix lres(const SeriesMatrix& a, const SeriesMatrix& b);
/// Greatest X with X*a <= b (b: p x n, a: q x n, X: p x q).
SeriesMatrix rres(const SeriesMatrix& b, const SeriesMatrix& a);

bool leq(const SeriesMatrix& a, const SeriesMatrix& b);

/// [a | b] side by side.
SeriesMatrix hconcat(const SeriesMatrix& a, const SeriesMatrix& b);

std::vector<std::vector<SlopeValue>> slopes(const SeriesMatrix& a);

/// Strongly connected components of the precedence graph of a square matrix
/// (arc j -> i when entry (i, j) is not eps), listed in a deterministic
/// topological order: receiving components first, ties broken by the smallest
/// original index inside the component.
struct BlockStructure {
  /// Original indices, component by component.
  std::vector<std::size_t> order;
  /// Half-open [begin, end) ranges into order, one per component.
  std::vector<std::pair<std::size_t, std::size_t>> blocks;

  bool irreducible() const { return blocks.size() == 1; }
};

BlockStructure block_form(const SeriesMatrix& a);

inline SeriesMatrix operator+(const SeriesMatrix& a, const SeriesMatrix& b) { return add(a, b); }
inline SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b) { return mul(a, b); }

}  // namespace maxplus
