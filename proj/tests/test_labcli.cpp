#include "doctest.h"
#include "oracles.hpp"

#include "ohlab/experiments.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace ohlab;

namespace {

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') quoted = !quoted;
    else if (c == sep && !quoted) out.push_back(std::exchange(cell, {}));
    else cell += c;
  }
  out.push_back(cell);
  return out;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

ExperimentConfig config(const std::string& command) {
  ExperimentConfig c;
  c.command = command;
  return c;
}

const ReportRow* find_row(const Report& r, const std::string& experiment, const std::string& key, long long value) {
  for (const auto& row : r.rows) {
    if (row.experiment != experiment) continue;
    for (const auto& [k, v] : row.params)
      if (k == key && std::holds_alternative<long long>(v) && std::get<long long>(v) == value) return &row;
  }
  return nullptr;
}

double computed(const ReportRow& row, const std::string& key) {
  for (const auto& [k, v] : row.computed)
    if (k == key) return v;
  FAIL("missing computed column " << key);
  return 0.0;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(123456789012345.0) == "1.23456789012e+14");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(kInf) == "inf");
  CHECK(format_number(-kInf) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("CSV layout") {
  Report r;
  r.rows.push_back({"a", {{"n", 1LL}}, {{"x", 0.5}}, {{"b", 1.0}}, "x <= b, always", true});
  r.rows.push_back({"b", {{"m", std::string("s")}}, {{"y", 2.0}, {"x", 1.5}}, {}, "y", false});
  const auto l = lines(to_csv(r));
  REQUIRE(l.size() == 3);
  CHECK(l[0] == "experiment,param.n,param.m,computed.x,computed.y,bound.b,citation,pass");
  CHECK(l[1] == "a,1,,0.5,,1,\"x <= b, always\",true");
  CHECK(l[2] == "b,,s,1.5,2,,y,false");
  CHECK_FALSE(r.all_pass());
}

TEST_CASE("JSON and CSV carry identical numbers") {
  const Report r = run_experiment(config("oh-norm"));
  const auto l = lines(to_csv(r));
  const auto header = split(l[0]);
  const auto doc = nlohmann::json::parse(to_json(r));
  REQUIRE(doc.size() == r.rows.size());
  std::vector<std::string> keys;
  const auto ordered = nlohmann::ordered_json::parse(to_json(r));
  for (const auto& item : ordered[0].items()) keys.push_back(item.key());
  CHECK(keys == std::vector<std::string>{"experiment", "params", "computed", "bound", "citation", "pass"});
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto cells = split(l[i + 1]);
    for (std::size_t c = 0; c < header.size(); ++c) {
      const std::string& h = header[c];
      if (h.rfind("computed.", 0) == 0) {
        const auto& v = doc[i]["computed"][h.substr(9)];
        CHECK(format_number(v.get<double>()) == cells[c]);
      }
    }
    CHECK(doc[i]["pass"].get<bool>() == (cells.back() == "true"));
    CHECK_FALSE(doc[i]["citation"].get<std::string>().empty());
  }
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(run_experiment(config("no-such-command")), std::invalid_argument);
  ExperimentConfig c = config("ncp");
  c.tol = 0.0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = config("ncp");
  c.format = "xml";
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = config("gdiag-scaling");
  c.n_values = {0};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.n_values = {5000};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  CHECK(experiment_names().size() == 8);
}

TEST_CASE("catalan helper") {
  for (int k = 0; k <= 20; ++k) CHECK(catalan(k) == oracle::catalan_binomial(k));
}

TEST_CASE("ncp rows") {
  const Report r = run_ncp(config("ncp"));
  CHECK(r.all_pass());
  const ReportRow* ten = find_row(r, "ncp", "m", 10);
  REQUIRE(ten);
  CHECK(computed(*ten, "count") == 42.0);
  CHECK(computed(*ten, "brute_force") == 42.0);
}

TEST_CASE("fock-moments rows") {
  ExperimentConfig c = config("fock-moments");
  c.depth = 4;
  const Report r = run_fock_moments(c);
  CHECK(r.all_pass());
  const ReportRow* four = find_row(r, "fock-moments/single", "m", 4);
  REQUIRE(four);
  CHECK(computed(*four, "vacuum") == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("voiculescu rows and the dimension cap") {
  ExperimentConfig c = config("voiculescu");
  c.n_values = {4};
  c.trials = 10;
  const Report r = run_voiculescu(c);
  CHECK(r.all_pass());
  const ReportRow* four = find_row(r, "voiculescu/unit", "n", 4);
  REQUIRE(four);
  CHECK(computed(*four, "lhs_trunc") <= 6.0);
  c.n_values = {6};
  c.depth = 8;
  CHECK_THROWS_WITH_AS(run_voiculescu(c), doctest::Contains("2015539"), std::length_error);
}

TEST_CASE("pw-verify rows") {
  ExperimentConfig c = config("pw-verify");
  c.grid = 512;
  const Report r = run_pw_verify(c);
  CHECK(r.all_pass());
  for (const auto& row : r.rows) {
    bool unit = false;
    for (const auto& [k, v] : row.params)
      if (k == "a" && std::get<double>(v) == 1.0) unit = true;
    for (const auto& [k, v] : row.params)
      if (unit && k == "b" && std::get<double>(v) == 1.0) CHECK(format_number(computed(row, "primal")) == "1");
  }
}

TEST_CASE("oh-norm input file") {
  const std::string path = "oh_norm_input_test.json";
  {
    std::ofstream f(path);
    f << "[[[[1,0],[0,0]],[[0,0],[0,0]]], [[[0,0],[0,0]],[[0,0],[1,0]]]]";
  }
  ExperimentConfig c = config("oh-norm");
  c.input = path;
  const Report r = run_oh_norm(c);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.all_pass());
  CHECK(computed(r.rows[0], "oh") == doctest::Approx(1.0));
  {
    std::ofstream f(path);
    f << "[[[1,0]], [[[0,0],[1,0]]]]";
  }
  CHECK_THROWS_AS(run_oh_norm(c), std::invalid_argument);
  {
    std::ofstream f(path);
    f << "not json";
  }
  CHECK_THROWS_AS(run_oh_norm(c), std::invalid_argument);
  std::remove(path.c_str());
  c.input = "does/not/exist.json";
  CHECK_THROWS_AS(run_oh_norm(c), std::invalid_argument);
}

TEST_CASE("fixed seeds reproduce reports exactly") {
  for (const char* cmd : {"oh-norm", "kfunc-duality"}) {
    ExperimentConfig c = config(cmd);
    c.trials = 2;
    CHECK(to_csv(run_experiment(c)) == to_csv(run_experiment(c)));
    ExperimentConfig d = c;
    d.seed = c.seed + 1;
    CHECK(to_csv(run_experiment(c)) != to_csv(run_experiment(d)));
  }
}
