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

// dissearch <scenario> [--config FILE] [--out DIR] [--seed S] [--threads T]
//           [--n-range a..b] [--regimes r1,r2]
// dissearch run --config FILE      (every section of the file)
// dissearch list
//
// Exit codes: 0 success, 1 numerical or I/O failure, 2 bad configuration,
// 3 a size cap was exceeded.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dissearch/cli.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string out;
  std::string n_range;
  std::string regimes;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "key=value configuration file");
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--threads", o.threads, "worker threads");
  sub->add_option("--n-range", o.n_range, "qubit range a..b");
  sub->add_option("--regimes", o.regimes, "comma-separated regimes");
}

// Overrides go through the same parser as files so they get the same checks.
dissearch::ScenarioConfig apply(dissearch::ScenarioConfig cfg, const Overrides& o) {
  std::ostringstream extra;
  extra << "[" << dissearch::to_string(cfg.scenario) << "]\n";
  std::string base = dissearch::emit_config(cfg);
  std::istringstream lines(base);
  std::string line;
  std::ostringstream merged;
  merged << extra.str();
  auto overridden = [&](const std::string& key) {
    return (key == "out" && !o.out.empty()) || (key == "seed" && o.seed) || (key == "threads" && o.threads) ||
           (key == "n_range" && !o.n_range.empty()) || (key == "regimes" && !o.regimes.empty());
  };
  while (std::getline(lines, line)) {
    const auto eq = line.find('=');
    if (line.empty() || line[0] == '[' || line[0] == '#' || eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    while (!key.empty() && key.back() == ' ') key.pop_back();
    if (key == "scenario" || overridden(key)) continue;
    merged << line << "\n";
  }
  if (!o.out.empty()) merged << "out = " << o.out << "\n";
  if (o.seed) merged << "seed = " << *o.seed << "\n";
  if (o.threads) merged << "threads = " << *o.threads << "\n";
  if (!o.n_range.empty()) merged << "n_range = " << o.n_range << "\n";
  if (!o.regimes.empty()) merged << "regimes = " << o.regimes << "\n";
  return dissearch::parse_configs(merged.str()).at(0);
}

void report(const dissearch::ScenarioConfig& cfg, const dissearch::ScenarioResult& res) {
  std::cout << dissearch::to_string(cfg.scenario) << ": ";
  for (const auto& o : res.outputs) std::cout << o.name << ".csv ";
  std::cout << "results_" << dissearch::to_string(cfg.scenario) << ".csv -> " << cfg.out << " (" << res.runtime_ms
            << " ms)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dissipative search simulations"};
  app.require_subcommand(1);
  Overrides o;
  std::vector<std::pair<dissearch::ScenarioKind, CLI::App*>> subs;
  for (dissearch::ScenarioKind s : dissearch::all_scenarios()) {
    CLI::App* sub = app.add_subcommand(dissearch::to_string(s), "run the " + dissearch::to_string(s) + " scenario");
    add_common(sub, o);
    subs.emplace_back(s, sub);
  }
  CLI::App* run = app.add_subcommand("run", "run every section in a configuration file");
  add_common(run, o);
  CLI::App* list = app.add_subcommand("list", "list scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) {
      for (dissearch::ScenarioKind s : dissearch::all_scenarios()) std::cout << dissearch::to_string(s) << "\n";
      return 0;
    }
    std::vector<dissearch::ScenarioConfig> configs;
    if (run->parsed()) {
      if (o.config.empty()) throw dissearch::ConfigError("run: --config is required");
      configs = dissearch::load_configs(o.config, false);
    } else {
      for (const auto& [kind, sub] : subs) {
        if (!sub->parsed()) continue;
        if (o.config.empty()) {
          configs.push_back(dissearch::default_config(kind));
        } else {
          for (const auto& c : dissearch::load_configs(o.config, false))
            if (c.scenario == kind) configs.push_back(c);
          if (configs.empty())
            throw dissearch::ConfigError("config file has no [" + dissearch::to_string(kind) + "] section");
        }
      }
    }
    for (auto& c : configs) c = apply(c, o);
    for (const auto& c : configs) report(c, dissearch::run_and_write(c));
  } catch (const dissearch::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const dissearch::CapExceeded& e) {
    std::cerr << "size cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
