#include "maxplus/teg.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <sstream>
#include <utility>

namespace maxplus {

namespace {

enum class Role { state, input, output, disturbance };

const char* role_name(Role r) {
  switch (r) {
    case Role::state: return "state";
    case Role::input: return "input";
    case Role::output: return "output";
    case Role::disturbance: return "disturbance";
  }
  return "";
}

/// Splits a line into whitespace-separated tokens, treating "->" as its own
/// token even when glued to its neighbours ("x1->x2").
std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::string word;
  const auto flush = [&] {
    if (!word.empty()) {
      out.push_back(word);
      word.clear();
    }
  };
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      flush();
      out.push_back("->");
      ++i;
    } else {
      word += c;
    }
  }
  flush();
  return out;
}

std::int64_t parse_count(const std::string& token, const char* what, std::size_t line) {
  std::int64_t v = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw TegError(std::string("expected an integer ") + what + ", got '" + token + "'", line);
  }
  return v;
}

struct NameIndex {
  std::map<std::string, std::pair<Role, std::size_t>> table;

  void add(const std::string& name, Role role, std::size_t index, std::size_t line) {
    if (!table.emplace(name, std::make_pair(role, index)).second) {
      throw TegError("duplicate transition name '" + name + "'", line);
    }
  }

  std::pair<Role, std::size_t> find(const std::string& name, std::size_t line) const {
    const auto it = table.find(name);
    if (it == table.end()) throw TegError("unknown transition '" + name + "'", line);
    return it->second;
  }
};

}  // namespace

TegModel parse_teg(const std::string& document) {
  TegModel model;
  NameIndex names;
  struct PendingPlace {
    TegPlace place;
    std::size_t line;
    // Role pair a bind_* directive promises; unconstrained for plain places.
    std::optional<std::pair<Role, Role>> want;
  };
  std::vector<PendingPlace> pending;

  std::istringstream in(document);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const std::size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::vector<std::string> tok = tokenize(line);
    if (tok.empty()) continue;
    const std::string& kw = tok[0];

    const auto declare = [&](Role role, std::vector<std::string>& list) {
      if (tok.size() < 2) throw TegError("expected at least one name after '" + kw + "'", lineno);
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (tok[i] == "->") throw TegError("'->' is not a transition name", lineno);
        names.add(tok[i], role, list.size(), lineno);
        list.push_back(tok[i]);
      }
    };

    const auto arc = [&](std::size_t at) -> std::pair<std::string, std::string> {
      if (tok.size() < at + 3 || tok[at + 1] != "->") {
        throw TegError("expected 'FROM -> TO' after '" + kw + "'", lineno);
      }
      return {tok[at], tok[at + 2]};
    };

    if (kw == "state") {
      declare(Role::state, model.states);
    } else if (kw == "input") {
      declare(Role::input, model.inputs);
    } else if (kw == "output") {
      declare(Role::output, model.outputs);
    } else if (kw == "disturbance") {
      declare(Role::disturbance, model.disturbances);
    } else if (kw == "place") {
      const auto [from, to] = arc(1);
      TegPlace p{from, to, 0, 0};
      std::size_t i = 4;
      while (i < tok.size()) {
        if (tok[i] == "time" && i + 1 < tok.size()) {
          p.time = parse_count(tok[i + 1], "holding time", lineno);
        } else if (tok[i] == "tokens" && i + 1 < tok.size()) {
          p.tokens = parse_count(tok[i + 1], "token count", lineno);
        } else {
          throw TegError("expected 'time N' or 'tokens N', got '" + tok[i] + "'", lineno);
        }
        i += 2;
      }
      if (p.time < 0) throw TegError("negative holding time", lineno);
      if (p.tokens < 0) throw TegError("negative marking", lineno);
      pending.push_back({p, lineno, std::nullopt});
    } else if (kw == "bind_input" || kw == "bind_output" || kw == "bind_disturbance") {
      const auto [from, to] = arc(1);
      if (tok.size() > 4) throw TegError("unexpected tokens after '" + kw + "' binding", lineno);
      const std::pair<Role, Role> want =
          kw == "bind_input"    ? std::pair{Role::input, Role::state}
          : kw == "bind_output" ? std::pair{Role::state, Role::output}
                                : std::pair{Role::disturbance, Role::state};
      pending.push_back({TegPlace{from, to, 0, 0}, lineno, want});
    } else {
      throw TegError("unknown directive '" + kw + "'", lineno);
    }
  }

  if (model.states.empty()) throw TegError("no state transitions", lineno == 0 ? 1 : lineno);

  for (const auto& [p, at, want] : pending) {
    const Role from = names.find(p.from, at).first;
    const Role to = names.find(p.to, at).first;
    if (want && (from != want->first || to != want->second)) {
      throw TegError("binding expects " + std::string(role_name(want->first)) + " -> " +
                         role_name(want->second) + ", got " + role_name(from) + " -> " +
                         role_name(to),
                     at);
    }
    if (from == Role::output) {
      throw TegError("place leaves output transition '" + p.from + "'", at);
    }
    if (to == Role::input || to == Role::disturbance) {
      throw TegError("place enters " + std::string(role_name(to)) + " transition '" + p.to + "'",
                     at);
    }
    if (from != Role::state && to == Role::output) {
      throw TegError("place links " + std::string(role_name(from)) + " '" + p.from +
                         "' directly to output '" + p.to + "'",
                     at);
    }
    model.places.push_back(p);
  }
  return model;
}

std::string print_teg(const TegModel& model) {
  std::ostringstream out;
  const auto declare = [&](const char* kw, const std::vector<std::string>& list) {
    if (list.empty()) return;
    out << kw;
    for (const auto& n : list) out << ' ' << n;
    out << '\n';
  };
  declare("state", model.states);
  declare("input", model.inputs);
  declare("output", model.outputs);
  declare("disturbance", model.disturbances);
  for (const auto& p : model.places) {
    out << "place " << p.from << " -> " << p.to << " time " << p.time << " tokens " << p.tokens
        << '\n';
  }
  return out.str();
}

SystemMatrices build_matrices(const TegModel& model) {
  std::map<std::string, std::pair<Role, std::size_t>> index;
  const auto fill = [&](const std::vector<std::string>& list, Role role) {
    for (std::size_t i = 0; i < list.size(); ++i) index[list[i]] = {role, i};
  };
  fill(model.states, Role::state);
  fill(model.inputs, Role::input);
  fill(model.outputs, Role::output);
  fill(model.disturbances, Role::disturbance);

  const std::size_t n = model.states.size();
  SystemMatrices m{SeriesMatrix(n, n), SeriesMatrix(n, model.inputs.size()),
                   SeriesMatrix(model.outputs.size(), n), SeriesMatrix(n, model.disturbances.size())};
  for (const auto& p : model.places) {
    const auto [from_role, j] = index.at(p.from);
    const auto [to_role, i] = index.at(p.to);
    const Series mono = Series::monomial(Scalar::fin(p.time), p.tokens);
    if (to_role == Role::output) {
      m.c.at(i, j) = add(m.c.at(i, j), mono);
    } else if (from_role == Role::state) {
      m.a.at(i, j) = add(m.a.at(i, j), mono);
    } else if (from_role == Role::input) {
      m.b.at(i, j) = add(m.b.at(i, j), mono);
    } else {
      m.r.at(i, j) = add(m.r.at(i, j), mono);
    }
  }
  if (model.disturbances.empty()) m.r = SeriesMatrix::identity(n);
  return m;
}

std::vector<std::string> disturbance_names(const TegModel& model) {
  if (!model.disturbances.empty()) return model.disturbances;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < model.states.size(); ++i) {
    std::string name = "w" + std::to_string(i + 1);
    const auto taken = [&](const std::string& s) {
      const auto has = [&](const std::vector<std::string>& v) {
        return std::find(v.begin(), v.end(), s) != v.end();
      };
      return has(model.states) || has(model.inputs) || has(model.outputs) ||
             std::find(out.begin(), out.end(), s) != out.end();
    };
    while (taken(name)) name += "_";
    out.push_back(name);
  }
  return out;
}

std::vector<std::string> validate_structure(const SystemMatrices& m) {
  std::vector<std::string> bad;
  const auto note = [&](const char* mat, std::size_t i, std::size_t j, const std::string& why) {
    bad.push_back(std::string(mat) + "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                  "): " + why);
  };

  // `unit_cols` = true asks for exactly one e per column and at most one per
  // row (B, R); false swaps the roles (C).
  const auto structural = [&](const char* name, const SeriesMatrix& mat, bool unit_cols) {
    std::vector<std::size_t> row_count(mat.rows(), 0), col_count(mat.cols(), 0);
    for (std::size_t i = 0; i < mat.rows(); ++i) {
      for (std::size_t j = 0; j < mat.cols(); ++j) {
        const Series& s = mat.at(i, j);
        if (s.is_zero()) continue;
        if (s == Series::one()) {
          ++row_count[i];
          ++col_count[j];
        } else {
          note(name, i, j, "non-structural entry");
        }
      }
    }
    for (std::size_t j = 0; j < mat.cols(); ++j) {
      if (unit_cols && col_count[j] != 1) {
        bad.push_back(std::string(name) + " column " + std::to_string(j + 1) + ": expected exactly one e, found " +
                      std::to_string(col_count[j]));
      }
      if (!unit_cols && col_count[j] > 1) {
        bad.push_back(std::string(name) + " column " + std::to_string(j + 1) + ": more than one e");
      }
    }
    for (std::size_t i = 0; i < mat.rows(); ++i) {
      if (!unit_cols && row_count[i] != 1) {
        bad.push_back(std::string(name) + " row " + std::to_string(i + 1) + ": expected exactly one e, found " +
                      std::to_string(row_count[i]));
      }
      if (unit_cols && row_count[i] > 1) {
        bad.push_back(std::string(name) + " row " + std::to_string(i + 1) + ": more than one e");
      }
    }
  };

  structural("B", m.b, true);
  structural("R", m.r, true);
  structural("C", m.c, false);
  return bad;
}

TransferMatrices transfer(const SystemMatrices& m) {
  TransferMatrices t{star(m.a), {}, {}, {}, {}};
  t.state_from_u = mul(t.a_star, m.b);
  t.state_from_w = mul(t.a_star, m.r);
  t.output_from_u = mul(m.c, t.state_from_u);
  t.output_from_w = mul(m.c, t.state_from_w);
  return t;
}

}  // namespace maxplus
