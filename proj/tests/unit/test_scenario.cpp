// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "mvbc/error.hpp"
#include "mvbc/scenario.hpp"

using namespace mvbc;
using namespace mvbc::sim;

namespace {
  std::size_t parse_error_line(std::string_view text) {
    try {
      parse_scenario_text(text);
    } catch (const ParseError &e) {
      return e.line();
    }
    FAIL("expected ParseError");
    return 0;
  }
}  // namespace

TEST_CASE("key/value grammar") {
  const auto sc = parse_scenario_text(R"(# comment line
name = "demo"   # trailing comment
n = 7
t = 2
L = 0x1_000
D = 9
seed = 42
faulty = [2, 5]
inputs = "random_same"

[strategy]
name = "corrupt_bsb"
mode = "flip"
rate = 40
loud = true

[inputs]
default = "all_same:0xAB"
3 = "0x1"
)");
  CHECK(sc.name == "demo");
  CHECK(sc.n == 7);
  CHECK(sc.t == 2);
  CHECK(sc.L == 4096);
  CHECK(sc.D == std::optional<std::size_t>(9));
  CHECK(sc.seed == 42);
  CHECK(sc.faulty == std::vector<ProcessorId>{1, 4});
  CHECK(sc.strategy.name == "corrupt_bsb");
  CHECK(sc.strategy.param("mode") == std::optional<std::string>("flip"));
  CHECK(sc.strategy.param_uint("rate", 0) == 40);
  CHECK(sc.strategy.param("loud") == std::optional<std::string>("true"));
  CHECK(sc.strategy.param_uint("absent", 7) == 7);
  CHECK(sc.inputs.spec == "all_same:0xAB");
  CHECK(sc.inputs.overrides.at(2) == "0x1");
  CHECK(sc.faulty_mask() == std::vector<bool>{false, true, false, false, true, false, false});
}

TEST_CASE("hash inside a quoted string is not a comment") {
  const auto sc = parse_scenario_text("n = 4\nt = 1\nL = 8\nname = \"a#b\"\n");
  CHECK(sc.name == "a#b");
}

TEST_CASE("parse errors report the offending line") {
  CHECK(parse_error_line("n = 4\nt = 1\nL = 8\nbogus = 1\n") == 4);
  CHECK(parse_error_line("n = 4\nn = 5\n") == 2);
  CHECK(parse_error_line("n = 4\nt = one\n") == 2);
  CHECK(parse_error_line("n = 4\n\n[nope]\n") == 3);
  CHECK(parse_error_line("n = 4\njust words\n") == 2);
  CHECK(parse_error_line("n = 4\nname = \"open\n") == 2);
  CHECK(parse_error_line("n = 4\nfaulty = [1, 2\n") == 2);
  CHECK(parse_error_line("n = 4\nfaulty = [0]\n") == 2);
  CHECK(parse_error_line("[inputs]\n0 = \"0x1\"\n") == 2);
  CHECK(parse_error_line("n = 4\nstrategy = honest\n") == 2);
  CHECK(parse_error_line("n = 4\n[strategy\n") == 2);
  CHECK(parse_error_line("n = 4\nt = 1\n") == 0);  // missing L
}

TEST_CASE("semantic errors are configuration errors") {
  CHECK_THROWS_AS(parse_scenario_text("n = 6\nt = 2\nL = 8\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_text("n = 4\nt = 1\nL = 8\nfaulty = [1, 2]\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_text("n = 4\nt = 1\nL = 8\nfaulty = [5]\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_text("n = 7\nt = 2\nL = 8\nfaulty = [3, 3]\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_text("n = 4\nt = 1\nL = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_text("n = 4\nt = 1\nL = 8\ninputs = \"0x1FF\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_text("n = 4\nt = 1\nL = 8\ninputs = \"zipf\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_text("n = 4\nt = 1\nL = 8\n[inputs]\n9 = \"0x1\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_text("n = 4\nt = 1\nL = 8\nD = 0\n"), ConfigError);
}

TEST_CASE("input generators") {
  Scenario sc;
  sc.n = 5;
  sc.t = 1;
  sc.L = 100;
  sc.seed = 9;

  sc.inputs.spec = "all_same:0xDEAD";
  for (const auto &v : sc.resolve_inputs()) CHECK(v == BitString::from_hex("DEAD", 100));

  sc.inputs.spec = "0x5";
  for (const auto &v : sc.resolve_inputs()) CHECK(v == BitString::from_uint(5, 100));

  sc.inputs.spec = "split:0x1,0x2";
  const auto split = sc.resolve_inputs();
  for (ProcessorId p = 0; p < 5; ++p) CHECK(split[p] == BitString::from_uint(p < 3 ? 1 : 2, 100));

  sc.inputs.spec = "random";
  const auto r1 = sc.resolve_inputs();
  CHECK(r1 == sc.resolve_inputs());
  CHECK(r1[0] != r1[1]);
  CHECK(r1[0].size() == 100);
  sc.inputs.spec = "random:9";
  CHECK(sc.resolve_inputs() == r1);
  sc.inputs.spec = "random:10";
  CHECK(sc.resolve_inputs() != r1);

  sc.inputs.spec = "random_same";
  const auto same = sc.resolve_inputs();
  for (const auto &v : same) CHECK(v == same[0]);
  CHECK_FALSE(same[0].all_zero());

  sc.inputs.overrides[4] = "0x0";
  CHECK(sc.resolve_inputs()[4].all_zero());
  CHECK(sc.resolve_inputs()[3] == same[0]);
}

TEST_CASE("json form matches the key/value form") {
  const auto text = parse_scenario_text(R"(name = "x"
n = 7
t = 2
L = 90
seed = 3
faulty = [1, 7]
[strategy]
name = "frame"
target = 2
[inputs]
default = "random_same"
4 = "0xF"
)");
  const auto j = text.to_json();
  CHECK(j.at("faulty") == json::array({1, 7}));
  const auto from_json = parse_scenario_json(j.dump(2));
  CHECK(from_json.to_json() == j);
  CHECK(from_json.inputs.overrides.at(3) == "0xF");
  CHECK(from_json.strategy.param_uint("target", 0) == 2);

  CHECK(parse_scenario_json(R"({"n":4,"t":1,"L":8,"strategy":"silent","inputs":"0x3"})").strategy.name ==
        "silent");
}

TEST_CASE("json errors") {
  try {
    parse_scenario_json("{\n  \"n\": 4,\n  \"t\": 1\n  \"L\": 8\n}");
    FAIL("expected ParseError");
  } catch (const ParseError &e) {
    CHECK(e.line() == 4);
  }
  CHECK_THROWS_AS(parse_scenario_json(R"({"n":4,"t":1})"), ParseError);
  CHECK_THROWS_AS(parse_scenario_json(R"({"n":4,"t":1,"L":8,"extra":1})"), ParseError);
  CHECK_THROWS_AS(parse_scenario_json(R"({"n":"four","t":1,"L":8})"), ParseError);
  CHECK_THROWS_AS(parse_scenario_json("[1,2]"), ParseError);
}

TEST_CASE("load_scenario dispatches on the extension") {
  const auto dir = std::filesystem::temp_directory_path() / "mvbc_scenario_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "kv.toml") << "n = 4\nt = 1\nL = 8\n";
    std::ofstream(dir / "js.json") << R"({"name":"named","n":4,"t":1,"L":8})";
  }
  CHECK(load_scenario(dir / "kv.toml").name == "kv");
  CHECK(load_scenario(dir / "js.json").name == "named");
  CHECK_THROWS_AS(load_scenario(dir / "missing.toml"), ParseError);
  std::filesystem::remove_all(dir);
}
