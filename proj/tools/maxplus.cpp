#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "maxplus/observer.hpp"
#include "maxplus/simulator.hpp"
#include "maxplus/teg.hpp"
#include "maxplus/text.hpp"

using nlohmann::ordered_json;
using namespace maxplus;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << text;
}

ordered_json matrix_json(const SeriesMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(print_series(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json table_json(const std::vector<std::string>& names, const Trajectory& t) {
  ordered_json rows = ordered_json::array();
  if (!t.slices.empty()) {
    for (std::size_t k = 0; k < t.slices.front().size(); ++k) {
      ordered_json row = ordered_json::array();
      for (const DaterSlice& s : t.slices) row.push_back(print_scalar(s[k]));
      rows.push_back(std::move(row));
    }
  }
  return ordered_json{{"names", names}, {"rows", std::move(rows)}};
}

std::string table_text(const std::vector<std::string>& names, const Trajectory& t) {
  Table table;
  table.names = names;
  if (!t.slices.empty()) {
    for (std::size_t k = 0; k < t.slices.front().size(); ++k) {
      std::vector<Scalar> row;
      for (const DaterSlice& s : t.slices) row.push_back(s[k]);
      table.rows.push_back(std::move(row));
    }
  }
  return print_table(table);
}

struct Options {
  std::string format = "text";
  std::string out;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", opt.out, "Write the result to this file instead of stdout");
}

int cmd_star(const std::string& path, const Options& opt) {
  const SeriesMatrix m = parse_matrix(slurp(path));
  const SeriesMatrix result = star(m);
  if (opt.format == "json") {
    emit(ordered_json{{"result", matrix_json(result)}}.dump(2) + "\n", opt.out);
  } else {
    emit(print_matrix(result) + "\n", opt.out);
  }
  return 0;
}

int cmd_transfer(const std::string& path, const Options& opt) {
  const SystemMatrices m = build_matrices(parse_teg(slurp(path)));
  const TransferMatrices t = transfer(m);
  if (opt.format == "json") {
    emit(ordered_json{{"a_star", matrix_json(t.a_star)},
                      {"state_from_u", matrix_json(t.state_from_u)},
                      {"state_from_w", matrix_json(t.state_from_w)},
                      {"output_from_u", matrix_json(t.output_from_u)},
                      {"output_from_w", matrix_json(t.output_from_w)}}
             .dump(2) + "\n",
         opt.out);
  } else {
    std::ostringstream text;
    text << "a_star: " << print_matrix(t.a_star) << '\n'
         << "state_from_u: " << print_matrix(t.state_from_u) << '\n'
         << "state_from_w: " << print_matrix(t.state_from_w) << '\n'
         << "output_from_u: " << print_matrix(t.output_from_u) << '\n'
         << "output_from_w: " << print_matrix(t.output_from_w) << '\n';
    emit(text.str(), opt.out);
  }
  return 0;
}

int cmd_check(const std::string& path, const Options& opt) {
  const TegModel model = parse_teg(slurp(path));
  const SystemMatrices m = build_matrices(model);
  const std::vector<std::string> violations = validate_structure(m);
  const std::size_t components = block_form(m.a).blocks.size();
  if (opt.format == "json") {
    emit(ordered_json{{"states", model.states.size()},
                      {"inputs", model.inputs.size()},
                      {"outputs", model.outputs.size()},
                      {"disturbances", disturbance_names(model).size()},
                      {"components", components},
                      {"violations", violations},
                      {"ok", violations.empty()}}
             .dump(2) + "\n",
         opt.out);
  } else {
    std::ostringstream text;
    text << "states: " << model.states.size() << '\n'
         << "inputs: " << model.inputs.size() << '\n'
         << "outputs: " << model.outputs.size() << '\n'
         << "disturbances: " << disturbance_names(model).size() << '\n'
         << "components: " << components << '\n';
    for (const std::string& v : violations) text << "violation: " << v << '\n';
    text << "ok: " << (violations.empty() ? "true" : "false") << '\n';
    emit(text.str(), opt.out);
  }
  return violations.empty() ? 0 : 1;
}

int cmd_observe(const std::string& path, const Options& opt) {
  const SystemMatrices m = build_matrices(parse_teg(slurp(path)));
  if (const auto violations = validate_structure(m); !violations.empty()) {
    for (const std::string& v : violations) std::cerr << "error: " << v << '\n';
    return 2;
  }
  const ObserverResult res = synthesize_observer(m);
  const ObserverChecks& c = res.checks;
  const bool pass = c.state_from_u_bounded && c.state_from_w_bounded && c.output_from_u_equal &&
                    c.output_from_w_equal && c.component_output_match && c.slopes_equal;
  if (opt.format == "json") {
    emit(ordered_json{{"gain_u", matrix_json(res.gain_u)},
                      {"gain_w", matrix_json(res.gain_w)},
                      {"gain", matrix_json(res.gain)},
                      {"checks",
                       ordered_json{{"state_from_u_bounded", c.state_from_u_bounded},
                                    {"state_from_w_bounded", c.state_from_w_bounded},
                                    {"output_from_u_equal", c.output_from_u_equal},
                                    {"output_from_w_equal", c.output_from_w_equal},
                                    {"component_output_match", c.component_output_match},
                                    {"slopes_equal", c.slopes_equal},
                                    {"exact_recovery", c.exact_recovery}}},
                      {"ok", pass}}
             .dump(2) + "\n",
         opt.out);
  } else {
    const auto flag = [](bool b) { return b ? "true" : "false"; };
    std::ostringstream text;
    text << "gain_u: " << print_matrix(res.gain_u) << '\n'
         << "gain_w: " << print_matrix(res.gain_w) << '\n'
         << "gain: " << print_matrix(res.gain) << '\n'
         << "state_from_u_bounded: " << flag(c.state_from_u_bounded) << '\n'
         << "state_from_w_bounded: " << flag(c.state_from_w_bounded) << '\n'
         << "output_from_u_equal: " << flag(c.output_from_u_equal) << '\n'
         << "output_from_w_equal: " << flag(c.output_from_w_equal) << '\n'
         << "component_output_match: " << flag(c.component_output_match) << '\n'
         << "slopes_equal: " << flag(c.slopes_equal) << '\n'
         << "exact_recovery: " << flag(c.exact_recovery) << '\n'
         << "ok: " << flag(pass) << '\n';
    emit(text.str(), opt.out);
  }
  return pass ? 0 : 1;
}

/// Reorders table columns to match `names`; every name must be present.
Trajectory table_to_trajectory(const Table& table, const std::vector<std::string>& names,
                               const char* what) {
  Trajectory t;
  for (const std::string& name : names) {
    std::size_t col = table.names.size();
    for (std::size_t j = 0; j < table.names.size(); ++j) {
      if (table.names[j] == name) {
        if (col != table.names.size()) {
          throw std::runtime_error(std::string(what) + ": duplicate column '" + name + "'");
        }
        col = j;
      }
    }
    if (col == table.names.size()) {
      throw std::runtime_error(std::string(what) + ": missing column '" + name + "'");
    }
    DaterSlice slice;
    for (const auto& row : table.rows) slice.push_back(row[col]);
    t.slices.push_back(std::move(slice));
  }
  return t;
}

int cmd_simulate(const std::string& path, const std::string& u_path, const std::string& w_path,
                 std::int64_t horizon, bool horizon_set, const Options& opt) {
  const TegModel model = parse_teg(slurp(path));
  const SystemMatrices m = build_matrices(model);
  const std::vector<std::string> w_names = disturbance_names(model);

  std::optional<Table> u_table, w_table;
  if (!u_path.empty()) u_table = parse_table(slurp(u_path));
  if (!w_path.empty()) w_table = parse_table(slurp(w_path));
  if (u_table && w_table && u_table->rows.size() != w_table->rows.size()) {
    throw std::runtime_error("horizon mismatch between the input and disturbance tables");
  }

  std::int64_t k_max = 40;
  if (horizon_set) {
    k_max = horizon;
  } else if (u_table || w_table) {
    const std::size_t rows = u_table ? u_table->rows.size() : w_table->rows.size();
    if (rows == 0) throw std::runtime_error("trajectory tables need at least one event row");
    k_max = static_cast<std::int64_t>(rows) - 1;
  }
  const auto check_rows = [&](const Table& t, const char* what) {
    if (static_cast<std::int64_t>(t.rows.size()) != k_max + 1) {
      throw std::runtime_error(std::string(what) + " table does not cover the horizon");
    }
  };

  Trajectory u, w;
  if (u_table) {
    check_rows(*u_table, "input");
    u = table_to_trajectory(*u_table, model.inputs, "input table");
  } else {
    u.slices.assign(model.inputs.size(),
                    DaterSlice(static_cast<std::size_t>(k_max) + 1, Scalar::fin(0)));
  }
  if (w_table) {
    check_rows(*w_table, "disturbance");
    w = table_to_trajectory(*w_table, w_names, "disturbance table");
  } else {
    w.slices.assign(w_names.size(),
                    DaterSlice(static_cast<std::size_t>(k_max) + 1, Scalar::eps()));
  }

  const Trajectory x = earliest_state(m, u, w, k_max);
  const Trajectory y = system_output(m, x);
  const ObserverResult res = synthesize_observer(m);
  const Trajectory x_hat = observer_run(m, res.gain, u, y, k_max);
  const Trajectory y_hat = system_output(m, x_hat);
  const EstimationReport rep = compare_estimation(x, x_hat, y, y_hat);

  if (opt.format == "json") {
    ordered_json gaps = ordered_json::object();
    for (std::size_t i = 0; i < model.states.size(); ++i) {
      gaps[model.states[i]] = print_scalar(rep.max_gap[i]);
    }
    ordered_json report{{"lower_bound_ok", rep.lower_bound_ok},
                        {"output_equal", rep.output_equal},
                        {"max_gap", std::move(gaps)}};
    if (rep.first_violation) {
      report["first_violation"] = ordered_json{{"transition", model.states[rep.first_violation->first]},
                                               {"event", rep.first_violation->second}};
    } else {
      report["first_violation"] = nullptr;
    }
    emit(ordered_json{{"x", table_json(model.states, x)},
                      {"xhat", table_json(model.states, x_hat)},
                      {"y", table_json(model.outputs, y)},
                      {"yhat", table_json(model.outputs, y_hat)},
                      {"report", std::move(report)}}
             .dump(2) + "\n",
         opt.out);
  } else {
    std::ostringstream text;
    text << "# x\n" << table_text(model.states, x) << '\n'
         << "# xhat\n" << table_text(model.states, x_hat) << '\n'
         << "# y\n" << table_text(model.outputs, y) << '\n'
         << "# yhat\n" << table_text(model.outputs, y_hat) << '\n'
         << "# report\n"
         << "lower_bound_ok: " << (rep.lower_bound_ok ? "true" : "false") << '\n'
         << "output_equal: " << (rep.output_equal ? "true" : "false") << '\n';
    for (std::size_t i = 0; i < model.states.size(); ++i) {
      text << "max_gap " << model.states[i] << ": " << print_scalar(rep.max_gap[i]) << '\n';
    }
    if (rep.first_violation) {
      text << "first_violation: " << model.states[rep.first_violation->first] << " at k="
           << rep.first_violation->second << '\n';
    }
    emit(text.str(), opt.out);
  }
  return (rep.lower_bound_ok && rep.output_equal) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Max-plus linear systems: series algebra, timed event graphs, observers"};
  app.require_subcommand(1);

  std::string star_path;
  Options star_opt;
  CLI::App* star_cmd = app.add_subcommand("star", "Kleene star of a series matrix");
  star_cmd->add_option("matrix", star_path, "Matrix file, e.g. [4g1,eps;0g0,2g1]")->required();
  add_common(star_cmd, star_opt);

  std::string transfer_path;
  Options transfer_opt;
  CLI::App* transfer_cmd = app.add_subcommand("transfer", "Input/output transfer matrices of a TEG");
  transfer_cmd->add_option("teg", transfer_path, "TEG description file")->required();
  add_common(transfer_cmd, transfer_opt);

  std::string observe_path;
  Options observe_opt;
  CLI::App* observe_cmd = app.add_subcommand("observe", "Synthesize the optimal observer gain");
  observe_cmd->add_option("teg", observe_path, "TEG description file")->required();
  add_common(observe_cmd, observe_opt);

  std::string check_path;
  Options check_opt;
  CLI::App* check_cmd = app.add_subcommand("check", "Validate the structural shape of a TEG");
  check_cmd->add_option("teg", check_path, "TEG description file")->required();
  add_common(check_cmd, check_opt);

  std::string sim_path, sim_u, sim_w;
  std::int64_t sim_horizon = 40;
  Options sim_opt;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Run the plant and its observer event by event");
  sim_cmd->add_option("teg", sim_path, "TEG description file")->required();
  sim_cmd->add_option("--u", sim_u, "Input dater table (default: all events at date 0)");
  sim_cmd->add_option("--w", sim_w, "Disturbance dater table (default: no disturbances)");
  CLI::Option* horizon_opt =
      sim_cmd->add_option("--horizon", sim_horizon, "Event horizon K")->check(CLI::NonNegativeNumber);
  add_common(sim_cmd, sim_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (star_cmd->parsed()) return cmd_star(star_path, star_opt);
    if (transfer_cmd->parsed()) return cmd_transfer(transfer_path, transfer_opt);
    if (observe_cmd->parsed()) return cmd_observe(observe_path, observe_opt);
    if (check_cmd->parsed()) return cmd_check(check_path, check_opt);
    if (sim_cmd->parsed()) {
      return cmd_simulate(sim_path, sim_u, sim_w, sim_horizon, horizon_opt->count() > 0, sim_opt);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << " (offset " << e.pos() << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
