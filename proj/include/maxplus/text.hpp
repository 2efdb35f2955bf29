#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "maxplus/matrix.hpp"
#include "maxplus/scalar.hpp"
#include "maxplus/series.hpp"

namespace maxplus {

/// Raised by every parser in this header; `pos` is a byte offset into the
/// input text, pointing at the offending token.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what), pos_(pos) {}

  std::size_t pos() const { return pos_; }

private:
  std::size_t pos_;
};

/// Scalars render as "eps", "T", or a decimal integer.
std::string print_scalar(const Scalar& a);
Scalar parse_scalar(const std::string& text);

/// Series grammar: a sum of monomials `<coeff>g<exp>`, optionally grouped in
/// parentheses, plus an optional periodic tail `(pattern).(mono)*`.  Printing
/// is canonical: "eps", "T", a bare polynomial, "(q).(r)*", or
/// "(p)+(q).(r)*"; parse(print(s)) == s bit-exactly.
std::string print_series(const Series& s);
Series parse_series(const std::string& text);

/// Matrices render as "[a,b;c,d]": rows separated by ';', entries by ','.
std::string print_matrix(const SeriesMatrix& m);
SeriesMatrix parse_matrix(const std::string& text);

/// Trajectory table: a header line "k <name>..." followed by one row per
/// event index (consecutive from 0), cells printed as scalars.  Blank lines
/// and '#' comments are ignored on input.
struct Table {
  std::vector<std::string> names;
  std::vector<std::vector<Scalar>> rows;

  friend bool operator==(const Table&, const Table&) = default;
};

std::string print_table(const Table& t);
Table parse_table(const std::string& text);

}  // namespace maxplus
