#include <doctest.h>

#include "cli_util.hpp"

#include <string>

namespace {

using cliutil::q;
using cliutil::run;
using cliutil::RunResult;

std::string cli_bin() { return cliutil::env_path("MAXPLUS_CLI"); }
std::string data_dir() { return cliutil::env_path("MAXPLUS_DATA"); }

const std::string kGain =
    "[(0g0).(4g1)*,(6g0).(4g1)*;"
    "(0g2).(4g1)*,(6g2).(4g1)*;"
    "eps,(0g0).(3g1)*]";

const std::string kAStar =
    "[(0g0).(4g1)*,(1g0).(4g1)*,(6g0).(4g1)*;"
    "(0g2).(4g1)*,(0g0+2g1+4g2+6g3)+(9g4).(4g1)*,(6g2).(4g1)*;"
    "eps,eps,(0g0).(3g1)*]";

const char* kBrokenLine =
    "state x1 x2 x3\n"
    "input u1 u2\n"
    "output y1\n"
    "disturbance w1 w2 w3\n"
    "place x1 -> x1 time 4 tokens 1\n"
    "place x2 -> x1 time 1\n"
    "place x3 -> x1 time 6\n"
    "place x1 -> x2 tokens 2\n"
    "place x2 -> x2 time 2 tokens 1\n"
    "place x3 -> x3 time 3 tokens 1\n"
    "bind_input u1 -> x2\n"
    "bind_input u2 -> x3\n"
    "bind_output x1 -> y1\n"
    "bind_disturbance w1 -> x1\n"
    "bind_disturbance w2 -> x2\n"
    "bind_disturbance w3 -> x3\n";

}  // namespace

TEST_CASE("star command prints the closure of a matrix file") {
  const RunResult r = run(q(cli_bin()) + " star " + q(data_dir() + "/fig1_A.txt"));
  CHECK(r.code == 0);
  CHECK(r.out == kAStar + "\n");
}

TEST_CASE("check command summarises the model structure") {
  const RunResult r = run(q(cli_bin()) + " check " + q(data_dir() + "/fig1.teg"));
  CHECK(r.code == 0);
  CHECK(r.out ==
        "states: 3\ninputs: 2\noutputs: 2\ndisturbances: 3\ncomponents: 2\n"
        "ok: true\n");

  const std::string bad = cliutil::temp_file(
      "bad.teg",
      "state x1\noutput y1\nplace x1 -> x1 time 4 tokens 1\nplace x1 -> y1 time 2\n");
  const RunResult rb = run(q(cli_bin()) + " check " + q(bad));
  CHECK(rb.code == 1);
  CHECK(rb.out.find("violation: C(1,1): non-structural entry") != std::string::npos);
  CHECK(rb.out.find("ok: false\n") != std::string::npos);
}

TEST_CASE("transfer command prints all five transfer matrices") {
  const RunResult r = run(q(cli_bin()) + " transfer " + q(data_dir() + "/fig1.teg"));
  CHECK(r.code == 0);
  const std::string expected =
      "a_star: " + kAStar + "\n" +
      "state_from_u: [(1g0).(4g1)*,(6g0).(4g1)*;"
      "(0g0+2g1+4g2+6g3)+(9g4).(4g1)*,(6g2).(4g1)*;"
      "eps,(0g0).(3g1)*]\n" +
      "state_from_w: " + kAStar + "\n" +
      "output_from_u: [(1g0).(4g1)*,(6g0).(4g1)*;eps,(0g0).(3g1)*]\n" +
      "output_from_w: [(0g0).(4g1)*,(1g0).(4g1)*,(6g0).(4g1)*;"
      "eps,eps,(0g0).(3g1)*]\n";
  CHECK(r.out == expected);
}

TEST_CASE("observe command prints the gain and its checks") {
  const RunResult r = run(q(cli_bin()) + " observe " + q(data_dir() + "/fig1.teg"));
  CHECK(r.code == 0);
  CHECK(r.out == "gain_u: " + kGain + "\n" + "gain_w: " + kGain + "\n" +
                     "gain: " + kGain + "\n" +
                     "state_from_u_bounded: true\n"
                     "state_from_w_bounded: true\n"
                     "output_from_u_equal: true\n"
                     "output_from_w_equal: true\n"
                     "component_output_match: true\n"
                     "slopes_equal: true\n"
                     "exact_recovery: false\n"
                     "ok: true\n");
}

TEST_CASE("observe flags a model whose components outnumber its sensors") {
  const std::string path = cliutil::temp_file("oneout.teg", kBrokenLine);
  const RunResult r = run(q(cli_bin()) + " observe " + q(path));
  CHECK(r.code == 1);
  CHECK(r.out.find("component_output_match: false") != std::string::npos);
  CHECK(r.out.find("ok: false") != std::string::npos);
}

TEST_CASE("simulate runs the plant and observer side by side") {
  const RunResult r =
      run(q(cli_bin()) + " simulate " + q(data_dir() + "/fig1.teg") + " --horizon 2");
  CHECK(r.code == 0);
  CHECK(r.out ==
        "# x\n"
        "k x1 x2 x3\n0 6 0 0\n1 10 2 3\n2 14 6 6\n\n"
        "# xhat\n"
        "k x1 x2 x3\n0 6 0 0\n1 10 2 3\n2 14 6 6\n\n"
        "# y\n"
        "k y1 y2\n0 6 0\n1 10 3\n2 14 6\n\n"
        "# yhat\n"
        "k y1 y2\n0 6 0\n1 10 3\n2 14 6\n\n"
        "# report\n"
        "lower_bound_ok: true\n"
        "output_equal: true\n"
        "max_gap x1: 0\n"
        "max_gap x2: 0\n"
        "max_gap x3: 0\n");
}

TEST_CASE("simulate accepts dater tables for inputs and disturbances") {
  const std::string u_path =
      cliutil::temp_file("u.tbl", "k u1 u2\n0 0 0\n1 0 0\n2 0 0\n");
  const std::string w_path = cliutil::temp_file(
      "w.tbl", "# delay the second machine by ten time units\n"
               "k w1 w2 w3\n0 eps 10 eps\n1 eps eps eps\n2 eps eps eps\n");
  const RunResult r = run(q(cli_bin()) + " simulate " + q(data_dir() + "/fig1.teg") +
                          " --u " + q(u_path) + " --w " + q(w_path));
  CHECK(r.code == 0);
  CHECK(r.out ==
        "# x\n"
        "k x1 x2 x3\n0 11 10 0\n1 15 12 3\n2 19 14 6\n\n"
        "# xhat\n"
        "k x1 x2 x3\n0 11 0 0\n1 15 2 3\n2 19 11 6\n\n"
        "# y\n"
        "k y1 y2\n0 11 0\n1 15 3\n2 19 6\n\n"
        "# yhat\n"
        "k y1 y2\n0 11 0\n1 15 3\n2 19 6\n\n"
        "# report\n"
        "lower_bound_ok: true\n"
        "output_equal: true\n"
        "max_gap x1: 0\n"
        "max_gap x2: 10\n"
        "max_gap x3: 0\n");
}

TEST_CASE("simulate rejects tables that disagree with the horizon") {
  const std::string u_path =
      cliutil::temp_file("u3.tbl", "k u1 u2\n0 0 0\n1 0 0\n2 0 0\n");
  const RunResult r = run(q(cli_bin()) + " simulate " + q(data_dir() + "/fig1.teg") +
                          " --u " + q(u_path) + " --horizon 5");
  CHECK(r.code == 2);
  CHECK(r.out.find("error: input table does not cover the horizon") != std::string::npos);

  const std::string w_path = cliutil::temp_file("w1.tbl", "k w1 w2 w3\n0 eps eps eps\n");
  const RunResult r2 = run(q(cli_bin()) + " simulate " + q(data_dir() + "/fig1.teg") +
                           " --u " + q(u_path) + " --w " + q(w_path));
  CHECK(r2.code == 2);
  CHECK(r2.out.find("error: horizon mismatch between the input and disturbance tables") !=
        std::string::npos);
}

TEST_CASE("parse failures report the offending offset and exit 2") {
  const std::string path = cliutil::temp_file("bad.mat", "[4g1,;]");
  const RunResult r = run(q(cli_bin()) + " star " + q(path));
  CHECK(r.code == 2);
  CHECK(r.out.find("error: ") != std::string::npos);
  CHECK(r.out.find("(offset ") != std::string::npos);
}

TEST_CASE("missing files and missing subcommands exit 2") {
  const RunResult r = run(q(cli_bin()) + " star /nonexistent.mat");
  CHECK(r.code == 2);
  CHECK(r.out.find("error: cannot read '/nonexistent.mat'") != std::string::npos);

  CHECK(run(q(cli_bin())).code == 2);
}

TEST_CASE("json output carries the same payload") {
  const RunResult r =
      run(q(cli_bin()) + " observe " + q(data_dir() + "/fig1.teg") + " --format json");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"gain\"") != std::string::npos);
  CHECK(r.out.find("\"(0g0).(4g1)*\"") != std::string::npos);
  CHECK(r.out.find("\"ok\": true") != std::string::npos);

  const RunResult rs = run(q(cli_bin()) + " simulate " + q(data_dir() + "/fig1.teg") +
                           " --horizon 2 --format json");
  CHECK(rs.code == 0);
  CHECK(rs.out.find("\"lower_bound_ok\": true") != std::string::npos);
  CHECK(rs.out.find("\"first_violation\": null") != std::string::npos);
  CHECK(rs.out.find("\"x\"") != std::string::npos);
}

TEST_CASE("results can be written to a file instead of stdout") {
  const std::string out_path = cliutil::temp_file("star.out", "");
  const RunResult r = run(q(cli_bin()) + " star " + q(data_dir() + "/fig1_A.txt") +
                          " --out " + q(out_path));
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(cliutil::slurp(out_path) == kAStar + "\n");
}

TEST_CASE("shipped reference outputs stay current") {
  const std::string g = data_dir() + "/golden";
  const auto compare = [&](const std::string& args, const std::string& file) {
    CAPTURE(file);
    const RunResult r = run(q(cli_bin()) + " " + args);
    CHECK(r.code == 0);
    CHECK(r.out == cliutil::slurp(g + "/" + file));
  };
  compare("star " + q(data_dir() + "/fig1_A.txt"), "star_A.txt");
  compare("check " + q(data_dir() + "/fig1.teg"), "check.txt");
  compare("transfer " + q(data_dir() + "/fig1.teg"), "transfer.txt");
  compare("observe " + q(data_dir() + "/fig1.teg"), "observe.txt");
  compare("observe " + q(data_dir() + "/fig1.teg") + " --format json", "observe.json");
  compare("simulate " + q(data_dir() + "/fig1.teg") + " --horizon 6", "simulate.txt");
}
