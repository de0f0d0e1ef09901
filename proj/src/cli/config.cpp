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

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dissearch/cli.hpp"

namespace dissearch {

std::string to_string(ScenarioKind s) {
  switch (s) {
    case ScenarioKind::fig2a_scaling: return "fig2a_scaling";
    case ScenarioKind::fig2b_dynamics: return "fig2b_dynamics";
    case ScenarioKind::table1_summary: return "table1_summary";
    case ScenarioKind::trotter_slope: return "trotter_slope";
    case ScenarioKind::prop1_invariance: return "prop1_invariance";
    case ScenarioKind::appendixE: return "appendixE";
    case ScenarioKind::greedy_census: return "greedy_census";
    case ScenarioKind::singletrace_speedup: return "singletrace_speedup";
  }
  return "?";
}

const std::vector<ScenarioKind>& all_scenarios() {
  static const std::vector<ScenarioKind> all = {
      ScenarioKind::fig2a_scaling,    ScenarioKind::fig2b_dynamics, ScenarioKind::table1_summary,
      ScenarioKind::trotter_slope,    ScenarioKind::prop1_invariance, ScenarioKind::appendixE,
      ScenarioKind::greedy_census,    ScenarioKind::singletrace_speedup};
  return all;
}

ScenarioKind scenario_from_string(const std::string& s) {
  for (ScenarioKind k : all_scenarios())
    if (to_string(k) == s) return k;
  throw ConfigError("unknown scenario '" + s + "'");
}

std::string to_string(EtaRule r) {
  switch (r) {
    case EtaRule::regime_default: return "default";
    case EtaRule::fixed: return "fixed";
    case EtaRule::inv_N: return "inv_N";
    case EtaRule::inv_n: return "inv_n";
    case EtaRule::inv_sqrtN: return "inv_sqrtN";
  }
  return "?";
}

EtaRule eta_rule_from_string(const std::string& s) {
  for (EtaRule r : {EtaRule::regime_default, EtaRule::fixed, EtaRule::inv_N, EtaRule::inv_n, EtaRule::inv_sqrtN})
    if (to_string(r) == s) return r;
  throw ConfigError("unknown eta_rule '" + s + "' (expected default, fixed, inv_N, inv_n or inv_sqrtN)");
}

EtaRule default_eta_rule(Regime r) {
  switch (r) {
    case Regime::eth: return EtaRule::inv_sqrtN;
    case Regime::projector: return EtaRule::inv_N;
    case Regime::bitflip: return EtaRule::inv_n;
    case Regime::laplacian: return EtaRule::fixed;
  }
  return EtaRule::inv_N;
}

double eta_value(EtaRule rule, Regime regime, int n, double fixed_eta) {
  if (rule == EtaRule::regime_default) rule = default_eta_rule(regime);
  const double N = std::ldexp(1.0, n);
  switch (rule) {
    case EtaRule::fixed: return regime == Regime::laplacian && !(fixed_eta > 0.0) ? 1.0 : fixed_eta;
    case EtaRule::inv_N: return 1.0 / N;
    case EtaRule::inv_n: return 1.0 / n;
    case EtaRule::inv_sqrtN: return 1.0 / std::sqrt(N);
    case EtaRule::regime_default: break;
  }
  return 1.0 / N;
}

ScenarioConfig default_config(ScenarioKind s) {
  ScenarioConfig c;
  c.scenario = s;
  switch (s) {
    case ScenarioKind::fig2a_scaling:
      c.n_min = 2;
      c.n_max = 5;
      c.regimes = {Regime::projector, Regime::bitflip};
      break;
    case ScenarioKind::fig2b_dynamics:
      c.n_min = c.n_max = 6;
      c.regimes = {Regime::projector, Regime::bitflip};
      break;
    case ScenarioKind::table1_summary:
      c.n_min = 2;
      c.n_max = 7;
      c.regimes = {Regime::eth, Regime::projector, Regime::bitflip};
      break;
    case ScenarioKind::trotter_slope:
      c.n_min = c.n_max = 3;
      c.regimes = {Regime::projector};
      break;
    case ScenarioKind::prop1_invariance:
      c.n_min = 2;
      c.n_max = 5;
      c.regimes = {Regime::projector};
      c.eta_multipliers = {1.0, 2.0, 4.0};
      break;
    case ScenarioKind::appendixE:
      c.n_min = c.n_max = 1;
      c.epsilons = {0.0, 0.01, 0.02};
      c.phis = {0.0, 0.01, 0.02};
      break;
    case ScenarioKind::greedy_census:
      c.n_min = 1;
      c.n_max = 10;
      break;
    case ScenarioKind::singletrace_speedup:
      c.n_min = 2;
      c.n_max = 10;
      c.regimes = {Regime::projector};
      break;
  }
  return c;
}

void validate_config(const ScenarioConfig& c) {
  if (c.n_min < 1 || c.n_max < c.n_min) throw ConfigError("n_range must satisfy 1 <= min <= max");
  if (c.threads < 1) throw ConfigError("threads must be at least 1");
  if (c.samples < 1) throw ConfigError("samples must be at least 1");
  if (!(c.tau > 0.0)) throw ConfigError("tau must be positive");
  if (!(c.eps_prime > 0.0) || !(c.eps_prime < 1.0)) throw ConfigError("eps_prime must lie in (0, 1)");
  if (!(c.eps > 0.0)) throw ConfigError("eps must be positive");
  if (c.p != 1 && c.p != 2 && c.p != 4) throw ConfigError("p must be 1, 2 or 4");
  if (c.r < 1) throw ConfigError("r must be at least 1");
  if (c.eta_rule == EtaRule::fixed && !(c.eta > 0.0)) throw ConfigError("eta_rule=fixed needs a positive 'eta'");
  if (c.eta_rule != EtaRule::regime_default && c.eta_rule != EtaRule::fixed)
    for (Regime r : c.regimes)
      if (r != Regime::laplacian && default_eta_rule(r) != c.eta_rule)
        throw ConfigError("eta_rule=" + to_string(c.eta_rule) + " is inconsistent with the " + to_string(r) +
                          " regime (expected " + to_string(default_eta_rule(r)) + ")");
  for (double m : c.eta_multipliers)
    if (!(m > 0.0)) throw ConfigError("eta_multipliers must be positive");
  const bool random_eth = c.scenario == ScenarioKind::fig2a_scaling || c.scenario == ScenarioKind::table1_summary;
  for (Regime r : c.regimes)
    if (r == Regime::eth && random_eth && !c.seed)
      throw ConfigError("missing required key 'seed': the eth regime draws random couplings");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

long long parse_int(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("key '" + key + "': '" + v + "' is not an integer");
  return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError("key '" + key + "': '" + v + "' is not an unsigned integer");
  return x;
}

double parse_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x))
    throw ConfigError("key '" + key + "': '" + v + "' is not a number");
  return x;
}

std::vector<double> parse_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  if (v.empty()) return out;
  for (const std::string& x : split(v, ',')) out.push_back(parse_double(key, x));
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + format_double(v[k]);
  return s;
}

void apply_key(ScenarioConfig& c, const std::string& key, const std::string& v) {
  if (key == "n_range") {
    const auto dots = v.find("..");
    if (dots == std::string::npos) {
      c.n_min = c.n_max = static_cast<int>(parse_int(key, v));
    } else {
      c.n_min = static_cast<int>(parse_int(key, trim(v.substr(0, dots))));
      c.n_max = static_cast<int>(parse_int(key, trim(v.substr(dots + 2))));
    }
  } else if (key == "regimes") {
    c.regimes.clear();
    if (!v.empty())
      for (const std::string& r : split(v, ',')) {
        try {
          c.regimes.push_back(regime_from_string(r));
        } catch (const InvalidArgument& e) {
          throw ConfigError(std::string("key 'regimes': ") + e.what());
        }
      }
  } else if (key == "eta_rule") {
    c.eta_rule = eta_rule_from_string(v);
  } else if (key == "eta") {
    c.eta = parse_double(key, v);
  } else if (key == "eta_multipliers") {
    c.eta_multipliers = parse_doubles(key, v);
  } else if (key == "epsilons") {
    c.epsilons = parse_doubles(key, v);
  } else if (key == "phis") {
    c.phis = parse_doubles(key, v);
  } else if (key == "tau") {
    c.tau = parse_double(key, v);
  } else if (key == "eps_prime") {
    c.eps_prime = parse_double(key, v);
  } else if (key == "eps") {
    c.eps = parse_double(key, v);
  } else if (key == "p") {
    c.p = static_cast<int>(parse_int(key, v));
  } else if (key == "r") {
    c.r = static_cast<int>(parse_int(key, v));
  } else if (key == "samples") {
    c.samples = static_cast<int>(parse_int(key, v));
  } else if (key == "seed") {
    c.seed = parse_u64(key, v);
  } else if (key == "out") {
    c.out = v;
  } else if (key == "threads") {
    c.threads = static_cast<int>(parse_int(key, v));
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

struct Section {
  std::string name;  // empty for the top level
  int line = 0;
  std::vector<std::pair<std::string, std::string>> entries;
};

ScenarioConfig build(const Section& s, bool validate) {
  std::string scenario = s.name;
  for (const auto& [k, v] : s.entries)
    if (k == "scenario") {
      if (!scenario.empty() && scenario != v)
        throw ConfigError("section [" + s.name + "] sets scenario=" + v);
      scenario = v;
    }
  if (scenario.empty()) throw ConfigError("missing required key 'scenario'");
  ScenarioConfig c = default_config(scenario_from_string(scenario));
  for (const auto& [k, v] : s.entries)
    if (k != "scenario") apply_key(c, k, v);
  if (validate) validate_config(c);
  return c;
}

}  // namespace

std::vector<ScenarioConfig> parse_configs(const std::string& text, bool validate) {
  std::vector<Section> sections(1);
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3)
        throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      Section s;
      s.name = trim(line.substr(1, line.size() - 2));
      s.line = lineno;
      sections.push_back(std::move(s));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    auto& entries = sections.back().entries;
    for (const auto& kv : entries)
      if (kv.first == key) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    entries.emplace_back(key, value);
  }
  std::vector<ScenarioConfig> out;
  const bool has_sections = sections.size() > 1;
  if (has_sections && !sections.front().entries.empty())
    throw ConfigError("keys before the first [section] are not allowed when sections are used");
  for (std::size_t k = has_sections ? 1 : 0; k < sections.size(); ++k) out.push_back(build(sections[k], validate));
  if (out.empty()) throw ConfigError("empty configuration");
  return out;
}

std::vector<ScenarioConfig> load_configs(const std::filesystem::path& path, bool validate) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_configs(ss.str(), validate);
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  auto all = load_configs(path);
  if (all.size() != 1) throw ConfigError("expected exactly one scenario in '" + path.string() + "'");
  return all.front();
}

std::string emit_config(const ScenarioConfig& c) {
  std::ostringstream os;
  os << "[" << to_string(c.scenario) << "]\n";
  os << "n_range=" << c.n_min << ".." << c.n_max << "\n";
  os << "regimes=";
  for (std::size_t k = 0; k < c.regimes.size(); ++k) os << (k ? "," : "") << to_string(c.regimes[k]);
  os << "\n";
  os << "eta_rule=" << to_string(c.eta_rule) << "\n";
  os << "eta=" << format_double(c.eta) << "\n";
  os << "eta_multipliers=" << join_doubles(c.eta_multipliers) << "\n";
  os << "epsilons=" << join_doubles(c.epsilons) << "\n";
  os << "phis=" << join_doubles(c.phis) << "\n";
  os << "tau=" << format_double(c.tau) << "\n";
  os << "eps_prime=" << format_double(c.eps_prime) << "\n";
  os << "eps=" << format_double(c.eps) << "\n";
  os << "p=" << c.p << "\n";
  os << "r=" << c.r << "\n";
  os << "samples=" << c.samples << "\n";
  if (c.seed) os << "seed=" << *c.seed << "\n";
  os << "out=" << c.out << "\n";
  os << "threads=" << c.threads << "\n";
  return os.str();
}

std::string config_hash(const ScenarioConfig& cfg) {
  // out and threads do not change results.
  ScenarioConfig c = cfg;
  c.out.clear();
  c.threads = 1;
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : emit_config(c)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace dissearch
