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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dissearch/common.hpp"
#include "dissearch/model.hpp"

namespace dissearch {

// Raised for malformed files, unknown keys or scenarios and missing keys.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class ScenarioKind {
  fig2a_scaling,
  fig2b_dynamics,
  table1_summary,
  trotter_slope,
  prop1_invariance,
  appendixE,
  greedy_census,
  singletrace_speedup,
};

std::string to_string(ScenarioKind s);
ScenarioKind scenario_from_string(const std::string& s);
const std::vector<ScenarioKind>& all_scenarios();

// regime_default follows the norm column of the summary table: projector
// 1/N, bitflip 1/n, eth 1/sqrt(N), laplacian normalized (eta unused).
enum class EtaRule { regime_default, fixed, inv_N, inv_n, inv_sqrtN };

std::string to_string(EtaRule r);
EtaRule eta_rule_from_string(const std::string& s);
EtaRule default_eta_rule(Regime r);
double eta_value(EtaRule rule, Regime regime, int n, double fixed_eta);

struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::fig2a_scaling;
  int n_min = 2;
  int n_max = 5;
  std::vector<Regime> regimes;
  EtaRule eta_rule = EtaRule::regime_default;
  double eta = 0.0;  // only read with eta_rule = fixed
  std::vector<double> eta_multipliers;  // prop1_invariance
  std::vector<double> epsilons;         // appendixE
  std::vector<double> phis;             // appendixE
  double tau = 1.0;
  double eps_prime = 0.05;
  double eps = 1e-2;
  int p = 2;
  int r = 1;
  int samples = 500;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  int threads = 1;

  bool operator==(const ScenarioConfig&) const = default;
};

// The scenario defaults, before any key is read.
ScenarioConfig default_config(ScenarioKind s);

// Checks cross-field consistency (ranges, eta rule vs regimes, eth seed).
void validate_config(const ScenarioConfig& cfg);

// key=value lines; '#' starts a comment; a [name] header selects the
// scenario. Several sections give several configs. validate = false skips
// validate_config so that command-line overrides can complete a file first.
std::vector<ScenarioConfig> parse_configs(const std::string& text, bool validate = true);
std::vector<ScenarioConfig> load_configs(const std::filesystem::path& path, bool validate = true);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string emit_config(const ScenarioConfig& cfg);

// 64-bit FNV-1a of emit_config, as 16 hex digits.
std::string config_hash(const ScenarioConfig& cfg);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

// 17 significant digits, so doubles round-trip exactly.
std::string format_double(double x);
std::string to_csv(const CsvTable& t);
void emit_csv(const CsvTable& t, const std::filesystem::path& path);
CsvTable read_csv(const std::filesystem::path& path);

namespace schema {
inline const std::vector<std::string> fig2a = {"regime", "n", "N", "engine", "mixing_time", "alpha_star_re", "alpha_star_im"};
inline const std::vector<std::string> dynamics = {"regime", "engine", "n", "t", "ground_overlap"};
inline const std::vector<std::string> trotter_slope = {"p", "r", "tau", "trace_error"};
inline const std::vector<std::string> results = {"scenario", "regime", "n", "parameter", "measured", "reference",
                                                 "relative_error", "config_hash", "seed"};
}  // namespace schema

struct ScenarioOutput {
  std::string name;  // file stem, e.g. fig2a_scaling_projector
  CsvTable table;
};

struct ScenarioResult {
  std::vector<ScenarioOutput> outputs;
  CsvTable results;  // ResultTable rows
  double runtime_ms = 0.0;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg);

// Runs and writes <out>/<name>.csv, <out>/results_<scenario>.csv and
// <out>/manifest.json (timing lives only in the manifest).
ScenarioResult run_and_write(const ScenarioConfig& cfg);

// Fitted mixing-time exponents against N, shared by table1_summary and the
// acceptance suite.
struct ExponentRow {
  std::string regime;
  std::string engine;
  int n_min = 0;
  int n_max = 0;
  double slope = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::vector<double> N;
  std::vector<double> T;
};

struct ExponentOptions {
  int shortrange_n_min = 20;
  int shortrange_n_max = 30;
  int eth_samples_per_N = 100;
  std::uint64_t seed = 7;
  double eps_prime = 0.05;
  double sqrt_tau = 1.0;
  int threads = 1;
};

std::vector<ExponentRow> table1_exponents(const ExponentOptions& opt);

}  // namespace dissearch
