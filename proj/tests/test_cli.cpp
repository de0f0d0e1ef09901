// Copyright 2026 The dissearch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "dissearch/cli.hpp"

using namespace dissearch;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("dissearch_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DISSEARCH_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("every scenario's default config survives emit and parse") {
  for (ScenarioKind s : all_scenarios()) {
    ScenarioConfig c = default_config(s);
    if (std::find(c.regimes.begin(), c.regimes.end(), Regime::eth) != c.regimes.end()) c.seed = 7;
    const auto parsed = parse_configs(emit_config(c));
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0] == c);
    CHECK(config_hash(parsed[0]) == config_hash(c));
    CHECK(scenario_from_string(to_string(s)) == s);
  }
}

TEST_CASE("config parser: sections, comments and overrides") {
  const auto cfgs = parse_configs(
      "# two scenarios\n"
      "[fig2a_scaling]\n"
      "n_range = 2..4   # inclusive\n"
      "regimes = projector, bitflip\n"
      "\n"
      "[trotter_slope]\n"
      "n_range = 3\n"
      "p = 4\n");
  REQUIRE(cfgs.size() == 2);
  CHECK(cfgs[0].scenario == ScenarioKind::fig2a_scaling);
  CHECK(cfgs[0].n_min == 2);
  CHECK(cfgs[0].n_max == 4);
  CHECK(cfgs[0].regimes == std::vector<Regime>{Regime::projector, Regime::bitflip});
  CHECK(cfgs[1].n_min == 3);
  CHECK(cfgs[1].n_max == 3);
  CHECK(cfgs[1].p == 4);
  const auto flat = parse_configs("scenario = appendixE\nepsilons = 0, 0.01\n");
  CHECK(flat[0].epsilons == std::vector<double>{0.0, 0.01});
}

TEST_CASE("config parser rejects malformed input") {
  CHECK_THROWS_AS(parse_configs("[fig2a_scaling]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_configs("[fig2a_scaling]\np = 2\np = 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_configs("p = 2\n[fig2a_scaling]\n"), ConfigError);
  CHECK_THROWS_AS(parse_configs("[no_such_scenario]\n"), ConfigError);
  CHECK_THROWS_AS(parse_configs("[fig2a_scaling]\nn_range = 5..2\n"), ConfigError);
  CHECK_THROWS_AS(parse_configs("[fig2a_scaling]\ntau = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_configs("[fig2a_scaling]\nregimes = projector, nope\n"), ConfigError);
  CHECK_THROWS_AS(parse_configs("[fig2a_scaling]\nthis line has no equals\n"), ConfigError);
  CHECK_THROWS_AS(parse_configs("# nothing\n"), ConfigError);
  CHECK_THROWS_AS(parse_configs("[fig2a_scaling]\nregimes = projector\neta_rule = inv_n\n"), ConfigError);
  CHECK_THROWS_AS(parse_configs("[fig2a_scaling]\neta_rule = fixed\n"), ConfigError);
}

TEST_CASE("eth runs that draw random couplings require a seed") {
  try {
    parse_configs("[fig2a_scaling]\nregimes = eth\nn_range = 2..3\n");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("seed") != std::string::npos);
  }
  CHECK_NOTHROW(parse_configs("[fig2a_scaling]\nregimes = eth\nn_range = 2..3\nseed = 5\n"));
  // The mean-field dynamics are deterministic.
  CHECK_NOTHROW(parse_configs("[fig2b_dynamics]\nregimes = eth\nn_range = 3\n"));
  // Validation can be deferred so that a command-line seed completes the file.
  CHECK_NOTHROW(parse_configs("[fig2a_scaling]\nregimes = eth\n", false));
}

TEST_CASE("config hash ignores the output directory and thread count only") {
  ScenarioConfig a = default_config(ScenarioKind::prop1_invariance);
  ScenarioConfig b = a;
  b.out = "elsewhere";
  b.threads = 4;
  CHECK(config_hash(a) == config_hash(b));
  b.n_max = 4;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a).size() == 16);
}

TEST_CASE("eta rules") {
  CHECK(default_eta_rule(Regime::projector) == EtaRule::inv_N);
  CHECK(default_eta_rule(Regime::bitflip) == EtaRule::inv_n);
  CHECK(default_eta_rule(Regime::eth) == EtaRule::inv_sqrtN);
  CHECK(eta_value(EtaRule::regime_default, Regime::projector, 3, 0.0) == doctest::Approx(0.125));
  CHECK(eta_value(EtaRule::regime_default, Regime::bitflip, 4, 0.0) == doctest::Approx(0.25));
  CHECK(eta_value(EtaRule::regime_default, Regime::eth, 2, 0.0) == doctest::Approx(0.5));
  CHECK(eta_value(EtaRule::fixed, Regime::projector, 3, 0.3) == 0.3);
  CHECK(eta_rule_from_string(to_string(EtaRule::inv_sqrtN)) == EtaRule::inv_sqrtN);
}

TEST_CASE("CSV writing quotes fields and reads back losslessly") {
  CsvTable t;
  t.header = {"name", "value"};
  t.add_row({"plain", format_double(0.1)});
  t.add_row({"with,comma", format_double(1.0 / 3.0)});
  t.add_row({"with \"quote\"", format_double(-2.5e-300)});
  CHECK_THROWS_AS(t.add_row({"short"}), DimensionError);
  const auto dir = scratch("csv");
  emit_csv(t, dir / "nested" / "t.csv");
  const CsvTable back = read_csv(dir / "nested" / "t.csv");
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK(std::stod(back.rows[1][1]) == 1.0 / 3.0);
  CHECK(to_csv(t).find("\"with,comma\"") != std::string::npos);
}

TEST_CASE("scenario outputs follow the schemas and are byte-identical across runs") {
  const auto dir = scratch("determinism");
  ScenarioConfig c = default_config(ScenarioKind::fig2a_scaling);
  c.n_min = 2;
  c.n_max = 3;
  c.regimes = {Regime::projector, Regime::bitflip, Regime::eth};
  c.samples = 40;
  c.seed = 11;
  c.out = (dir / "a").string();
  const ScenarioResult r = run_and_write(c);
  c.out = (dir / "b").string();
  c.threads = 2;
  run_and_write(c);
  for (const ScenarioOutput& o : r.outputs) {
    CHECK(o.table.header == schema::fig2a);
    CHECK(slurp(dir / "a" / (o.name + ".csv")) == slurp(dir / "b" / (o.name + ".csv")));
  }
  CHECK(r.outputs.size() == 3);
  CHECK(r.results.header == schema::results);
  CHECK(slurp(dir / "a" / "results_fig2a_scaling.csv") == slurp(dir / "b" / "results_fig2a_scaling.csv"));

  const nlohmann::json m = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  CHECK(m.contains("fig2a_scaling"));
  CHECK(m["fig2a_scaling"]["seed"] == 11);
  CHECK(m["fig2a_scaling"]["config_hash"] == config_hash(c));
  CHECK(m["fig2a_scaling"]["runtime_ms"].get<double>() >= 0.0);
}

TEST_CASE("small runs of every scenario") {
  const auto dir = scratch("all");
  for (ScenarioKind s : all_scenarios()) {
    ScenarioConfig c = default_config(s);
    c.out = dir.string();
    switch (s) {
      case ScenarioKind::fig2a_scaling: c.n_max = 3; break;
      case ScenarioKind::fig2b_dynamics: c.n_min = c.n_max = 3; break;
      case ScenarioKind::table1_summary: c.regimes = {Regime::projector, Regime::bitflip}; break;
      case ScenarioKind::prop1_invariance: c.n_max = 3; break;
      case ScenarioKind::greedy_census: c.n_max = 4; break;
      default: break;
    }
    const ScenarioResult r = run_and_write(c);
    CHECK(!r.outputs.empty());
    for (const ScenarioOutput& o : r.outputs) {
      CHECK(!o.table.rows.empty());
      CHECK(std::filesystem::exists(dir / (o.name + ".csv")));
    }
    CHECK(std::filesystem::exists(dir / ("results_" + to_string(s) + ".csv")));
  }
  const CsvTable dyn = read_csv(dir / "fig2b_dynamics_projector.csv");
  CHECK(dyn.header == schema::dynamics);
  const CsvTable tr = read_csv(dir / "trotter_slope_projector.csv");
  CHECK(tr.header == schema::trotter_slope);
  CHECK(tr.rows.size() == 7);
}

TEST_CASE("command-line exit codes") {
  const auto dir = scratch("exit");
  CHECK(run_cli("list") == 0);
  CHECK(run_cli("appendixE --out " + dir.string()) == 0);
  CHECK(std::filesystem::exists(dir / "appendixE.csv"));
  // Unknown subcommand and unknown flag.
  CHECK(run_cli("no_such_scenario") == 2);
  CHECK(run_cli("appendixE --bogus 1") == 2);
  // Config errors.
  CHECK(run_cli("run") == 2);
  {
    std::ofstream(dir / "bad.cfg") << "[appendixE]\nunknown_key = 1\n";
    CHECK(run_cli("run --config " + (dir / "bad.cfg").string()) == 2);
    std::ofstream(dir / "eth.cfg") << "[fig2a_scaling]\nregimes = eth\nn_range = 2..2\nsamples = 30\n";
    CHECK(run_cli("run --config " + (dir / "eth.cfg").string() + " --out " + dir.string()) == 2);
    // The seed can come from the command line instead.
    CHECK(run_cli("run --config " + (dir / "eth.cfg").string() + " --seed 3 --out " + dir.string()) == 0);
  }
  // Full-space caps.
  CHECK(run_cli("fig2a_scaling --regimes projector --n-range 2..8 --out " + dir.string()) == 3);
}
