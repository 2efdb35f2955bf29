#include "maxplus/text.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>

namespace maxplus {

namespace {

struct Cursor {
  const std::string& text;
  std::size_t base = 0;  // offset of `text` inside the original document
  std::size_t at = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, base + at); }

  void skip_ws() {
    while (at < text.size() && std::isspace(static_cast<unsigned char>(text[at]))) ++at;
  }

  bool done() {
    skip_ws();
    return at >= text.size();
  }

  char peek() {
    skip_ws();
    return at < text.size() ? text[at] : '\0';
  }

  bool eat(char c) {
    if (peek() == c) {
      ++at;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!eat(c)) fail(std::string("expected ") + what);
  }

  bool eat_word(const char* w) {
    skip_ws();
    std::size_t n = 0;
    while (w[n] != '\0') ++n;
    if (text.compare(at, n, w) != 0) return false;
    at += n;
    return true;
  }

  std::int64_t integer(const char* what) {
    skip_ws();
    std::size_t end = at;
    if (end < text.size() && text[end] == '-') ++end;
    while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
    std::int64_t v = 0;
    const auto res = std::from_chars(text.data() + at, text.data() + end, v);
    if (res.ec != std::errc() || res.ptr == text.data() + at) {
      fail(std::string("expected ") + what);
    }
    at = end;
    return v;
  }

  Scalar scalar() {
    if (eat_word("eps")) return Scalar::eps();
    if (eat_word("T")) return Scalar::top();
    return Scalar::fin(integer("a scalar (eps, T, or an integer)"));
  }
};

std::string print_mono(const Monomial& m) {
  return print_scalar(m.coeff) + "g" + std::to_string(m.exp);
}

std::string print_poly(const std::vector<Monomial>& terms) {
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) out += '+';
    out += print_mono(terms[i]);
  }
  return out;
}

Monomial parse_mono(Cursor& c) {
  Monomial m;
  m.coeff = c.scalar();
  if (!c.eat('g')) c.fail("expected 'g' after a monomial coefficient");
  m.exp = c.integer("an exponent");
  return m;
}

std::vector<Monomial> parse_poly(Cursor& c) {
  std::vector<Monomial> terms{parse_mono(c)};
  while (c.eat('+')) terms.push_back(parse_mono(c));
  return terms;
}

/// One '+'-separated summand: a monomial, a parenthesized polynomial, or a
/// parenthesized polynomial followed by a periodic tail ".(mono)*".
Series parse_term(Cursor& c) {
  if (!c.eat('(')) return Series::polynomial({parse_mono(c)});
  const std::size_t open = c.at;
  std::vector<Monomial> group = parse_poly(c);
  c.expect(')', "')'");
  if (!c.eat('.')) return Series::polynomial(std::move(group));
  c.expect('(', "'(' before the period");
  const Monomial r = parse_mono(c);
  c.expect(')', "')' after the period");
  c.expect('*', "'*'");
  try {
    return mul(Series::polynomial(std::move(group)), star(Series::monomial(r.coeff, r.exp)));
  } catch (const std::domain_error& e) {
    throw ParseError(e.what(), c.base + open);
  }
}

}  // namespace

std::string print_scalar(const Scalar& a) {
  if (a.is_eps()) return "eps";
  if (a.is_top()) return "T";
  return std::to_string(a.value());
}

Scalar parse_scalar(const std::string& text) {
  Cursor c{text};
  const Scalar v = c.scalar();
  if (!c.done()) c.fail("trailing input after a scalar");
  return v;
}

std::string print_series(const Series& s) {
  if (s.is_zero()) return "eps";
  if (s.is_top()) return "T";
  if (s.is_polynomial()) return print_poly(s.transient());
  const std::string tail = "(" + print_poly(s.pattern()) + ").(" +
                           std::to_string(s.period_time()) + "g" +
                           std::to_string(s.period_events()) + ")*";
  if (s.transient().empty()) return tail;
  return "(" + print_poly(s.transient()) + ")+" + tail;
}

namespace {

Series parse_series_at(const std::string& text, std::size_t base) {
  Cursor c{text, base};
  if (c.done()) c.fail("empty series");
  if (c.eat_word("eps") && c.done()) return Series::zero();
  c.at = 0;
  if (c.eat_word("T") && c.done()) return Series::top();
  c.at = 0;
  Series out = parse_term(c);
  while (c.eat('+')) out = add(out, parse_term(c));
  if (!c.done()) c.fail("trailing input after a series");
  return out;
}

}  // namespace

Series parse_series(const std::string& text) { return parse_series_at(text, 0); }

std::string print_matrix(const SeriesMatrix& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) out += ';';
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += print_series(m.at(i, j));
    }
  }
  return out + "]";
}

SeriesMatrix parse_matrix(const std::string& text) {
  Cursor c{text};
  c.expect('[', "'['");
  // Cells hold no brackets, commas, or semicolons, so a flat scan splits them.
  std::vector<std::vector<Series>> rows(1);
  std::size_t cell_start = c.at;
  const auto close_cell = [&](std::size_t end) {
    rows.back().push_back(parse_series_at(text.substr(cell_start, end - cell_start), cell_start));
  };
  while (true) {
    if (c.at >= text.size()) c.fail("unterminated matrix");
    const char ch = text[c.at];
    if (ch == ',') {
      close_cell(c.at);
      cell_start = ++c.at;
    } else if (ch == ';') {
      close_cell(c.at);
      rows.emplace_back();
      cell_start = ++c.at;
    } else if (ch == ']') {
      close_cell(c.at);
      ++c.at;
      break;
    } else {
      ++c.at;
    }
  }
  if (!c.done()) c.fail("trailing input after a matrix");
  SeriesMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw ParseError("ragged matrix rows", 0);
    for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

std::string print_table(const Table& t) {
  std::string out = "k";
  for (const auto& n : t.names) out += " " + n;
  out += '\n';
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    out += std::to_string(k);
    for (const Scalar& cell : t.rows[k]) out += " " + print_scalar(cell);
    out += '\n';
  }
  return out;
}

Table parse_table(const std::string& text) {
  Table t;
  bool saw_header = false;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string::npos) line_end = text.size();
    std::string line = text.substr(line_start, line_end - line_start);
    if (const std::size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);

    std::vector<std::string> tokens;
    std::vector<std::size_t> offsets;
    for (std::size_t i = 0; i < line.size();) {
      if (std::isspace(static_cast<unsigned char>(line[i]))) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      tokens.push_back(line.substr(i, j - i));
      offsets.push_back(line_start + i);
      i = j;
    }

    if (!tokens.empty()) {
      if (!saw_header) {
        if (tokens.front() != "k") throw ParseError("table header must start with 'k'", offsets[0]);
        t.names.assign(tokens.begin() + 1, tokens.end());
        saw_header = true;
      } else {
        if (tokens.size() != t.names.size() + 1) {
          throw ParseError("row width does not match the header", offsets[0]);
        }
        std::int64_t k = 0;
        const auto res = std::from_chars(tokens[0].data(), tokens[0].data() + tokens[0].size(), k);
        if (res.ec != std::errc() || res.ptr != tokens[0].data() + tokens[0].size() ||
            k != static_cast<std::int64_t>(t.rows.size())) {
          throw ParseError("event indices must run 0, 1, 2, ...", offsets[0]);
        }
        std::vector<Scalar> row;
        for (std::size_t i = 1; i < tokens.size(); ++i) {
          try {
            row.push_back(parse_scalar(tokens[i]));
          } catch (const ParseError& e) {
            throw ParseError(e.what(), offsets[i] + e.pos());
          }
        }
        t.rows.push_back(std::move(row));
      }
    }
    if (line_end == text.size()) break;
    line_start = line_end + 1;
  }
  if (!saw_header) throw ParseError("missing table header", 0);
  return t;
}

}  // namespace maxplus
