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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <map>
#include <thread>

#include <json.hpp>

#include "dissearch/baselines.hpp"
#include "dissearch/cli.hpp"
#include "dissearch/continuous.hpp"
#include "dissearch/discrete.hpp"
#include "dissearch/fit.hpp"
#include "dissearch/jump.hpp"

namespace dissearch {

namespace {

// Index-ordered results regardless of which worker computed them.
template <class F>
auto parallel_map(int count, int threads, F f) -> std::vector<decltype(f(0))> {
  using R = decltype(f(0));
  std::vector<std::optional<R>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k = next++; k < count; k = next++) {
      try {
        slots[k].emplace(f(k));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int T = std::max(1, std::min(threads, count));
  if (T == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < T; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::string fmt(double x) { return format_double(x); }
std::string fmt(long long x) { return std::to_string(x); }
std::string fmt(int x) { return std::to_string(x); }

Mat ground_projector(int N, int g) {
  Mat P = Mat::Zero(N, N);
  P(g, g) = 1.0;
  return P;
}

// Full-spectrum rate: dense eigensolve up to n = 4, invariant Krylov space
// of a seeded random start beyond.
SpectrumReport lindblad_rate(const LindbladGenerator& G) {
  if (G.dim() <= 16) return mixing_rate(G.dense());
  return mixing_rate_krylov(G, 1, 2000);
}

struct RateRow {
  std::string engine;
  cplx alpha;
};

LindbladGenerator regime_generator(Regime regime, int n, double eta, std::optional<std::uint64_t> seed) {
  const GroverHamiltonian H = grover_hamiltonian(n, {0});
  const CouplingSpec A = coupling(regime, n, eta, seed);
  return LindbladGenerator(H.matrix(), {build_jump(H.energies, A.matrix, regime_filter(regime)).L}, false);
}

void check_cap(bool ok, const std::string& what) {
  if (!ok) throw CapExceeded(what);
}

// Time at which a reduced variable first reaches `target`.
double reduced_crossing(const ReducedOdeSystem& sys, int var, double target) {
  const double Tm = reduced_mixing_rate(sys).mixing_time();
  double horizon = 4.0 * Tm;
  for (int attempt = 0; attempt < 12; ++attempt, horizon *= 2.0) {
    const std::vector<double> grid = linspace(0.0, horizon, 801);
    const std::vector<RVec> z = evolve_reduced(sys, grid);
    for (std::size_t k = 0; k < z.size(); ++k)
      if (z[k](var) >= target) return grid[k];
  }
  throw NumericalError("reduced_crossing: target overlap not reached");
}

void add_result(CsvTable& t, const ScenarioConfig& cfg, const std::string& regime, int n, const std::string& param,
                double measured, std::optional<double> reference) {
  std::string ref, rel;
  if (reference) {
    ref = fmt(*reference);
    rel = fmt(std::abs(measured - *reference) / std::max(std::abs(*reference), 1e-300));
  }
  t.add_row({to_string(cfg.scenario), regime, fmt(n), param, fmt(measured), ref, rel, config_hash(cfg),
             cfg.seed ? std::to_string(*cfg.seed) : ""});
}

// --- fig2a_scaling ---------------------------------------------------------

std::vector<RateRow> fig2a_point(const ScenarioConfig& cfg, Regime regime, int n) {
  const double N = std::ldexp(1.0, n);
  const double eta = eta_value(cfg.eta_rule, regime, n, cfg.eta);
  std::vector<RateRow> rows;
  switch (regime) {
    case Regime::projector: {
      const LindbladGenerator G = regime_generator(regime, n, eta, std::nullopt);
      rows.push_back({"lme_full", *lindblad_rate(G).alpha_star});
      rows.push_back({"lme_population", *observable_sector_rate(G, ground_projector(G.dim(), 0)).alpha_star});
      rows.push_back({"lme_reduced", reduced_mixing_rate(reduced_system(ReducedRegime::projector, n, eta)).alpha_star});
      const GroverHamiltonian H = grover_hamiltonian(n, {0});
      const CouplingSpec A = coupling(Regime::projector, n, eta);
      rows.push_back({"dlme", rate_matrix_gap(dlme_rates(H.energies, A.matrix, regime_filter(regime)))});
      rows.push_back({"pme", rate_matrix_gap(pme_rates(H.energies, A.matrix))});
      break;
    }
    case Regime::bitflip: {
      if (n <= 4) rows.push_back({"lme_full", *lindblad_rate(regime_generator(regime, n, eta, std::nullopt)).alpha_star});
      rows.push_back({"lme_reduced", reduced_mixing_rate(reduced_system(ReducedRegime::shortrange_lme, n, eta)).alpha_star});
      rows.push_back({"pme_reduced", reduced_mixing_rate(reduced_system(ReducedRegime::shortrange_pme, n, eta)).alpha_star});
      break;
    }
    case Regime::eth: {
      const LindbladGenerator E = eth_expected_generator(n, eta);
      const Mat Pg = ground_projector(E.dim(), 0);
      rows.push_back({"lme_expected_population", *observable_sector_rate(E, Pg).alpha_star});
      const LindbladGenerator S = eth_sample_mean_generator(n, eta, cfg.samples, *cfg.seed);
      rows.push_back({"lme_sample_mean_population", *observable_sector_rate(S, Pg).alpha_star});
      rows.push_back({"lme_reduced", reduced_mixing_rate(reduced_system(ReducedRegime::eth_mean, n, eta)).alpha_star});
      break;
    }
    case Regime::laplacian: {
      const LindbladGenerator G = regime_generator(regime, n, eta, std::nullopt);
      rows.push_back({"lme_full", *lindblad_rate(G).alpha_star});
      rows.push_back({"lme_population", *observable_sector_rate(G, ground_projector(G.dim(), 0)).alpha_star});
      break;
    }
  }
  (void)N;
  return rows;
}

ScenarioResult run_fig2a(const ScenarioConfig& cfg) {
  for (Regime r : cfg.regimes) {
    const int cap = r == Regime::bitflip ? 60 : kMaxMatrixFreeQubits;
    check_cap(cfg.n_max <= cap, "fig2a_scaling: the " + to_string(r) + " regime is limited to n <= " + std::to_string(cap) +
                                    " (full-space spectra); use bitflip for reduced-system sweeps");
  }
  std::vector<std::pair<Regime, int>> points;
  for (Regime r : cfg.regimes)
    for (int n = cfg.n_min; n <= cfg.n_max; ++n) points.emplace_back(r, n);
  const auto rates = parallel_map(static_cast<int>(points.size()), cfg.threads,
                                  [&](int k) { return fig2a_point(cfg, points[k].first, points[k].second); });
  ScenarioResult res;
  res.results.header = schema::results;
  std::map<Regime, CsvTable> tables;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto [regime, n] = points[k];
    CsvTable& t = tables[regime];
    t.header = schema::fig2a;
    const double N = std::ldexp(1.0, n);
    for (const RateRow& row : rates[k]) {
      const double T = 1.0 / std::abs(row.alpha.real());
      t.add_row({to_string(regime), fmt(n), fmt(static_cast<long long>(N)), row.engine, fmt(T), fmt(row.alpha.real()),
                 fmt(row.alpha.imag())});
      std::optional<double> ref;
      if (regime == Regime::projector && cfg.eta_rule == EtaRule::regime_default) {
        if (row.engine == "dlme") ref = N * N;
        else if (row.engine == "pme") ref = N;
        else ref = N * N / (N - 1.0);
      }
      add_result(res.results, cfg, to_string(regime), n, "mixing_time:" + row.engine, T, ref);
    }
  }
  for (auto& [regime, t] : tables) res.outputs.push_back({"fig2a_scaling_" + to_string(regime), std::move(t)});
  return res;
}

// --- fig2b_dynamics --------------------------------------------------------

void add_dynamics(CsvTable& t, const std::string& regime, const std::string& engine, int n,
                  const std::vector<double>& times, const std::vector<double>& overlap) {
  for (std::size_t k = 0; k < times.size(); ++k) t.add_row({regime, engine, fmt(n), fmt(times[k]), fmt(overlap[k])});
}

ScenarioResult run_fig2b(const ScenarioConfig& cfg) {
  const int n = cfg.n_max;
  const double target = 0.95;
  check_cap(n <= kMaxMatrixFreeQubits, "fig2b_dynamics: full-space dynamics limited to n <= 7");
  ScenarioResult res;
  res.results.header = schema::results;
  const GroverHamiltonian H = grover_hamiltonian(n, {0});
  const DensityMatrix s0 = DensityMatrix::uniform_superposition(H.N());
  const int samples = 201;
  for (Regime regime : cfg.regimes) {
    const double eta = eta_value(cfg.eta_rule, regime, n, cfg.eta);
    CsvTable t;
    t.header = schema::dynamics;
    const std::string rn = to_string(regime);
    auto full_lme = [&](double horizon) {
      const CouplingSpec A = coupling(regime, n, eta, cfg.seed);
      Trajectory tr = evolve_lme(H, A, regime_filter(regime), s0, linspace(0.0, horizon, samples));
      truncate_at(tr, "ground_overlap", target);
      return tr;
    };
    switch (regime) {
      case Regime::projector:
      case Regime::laplacian: {
        const double t95 = reduced_crossing(reduced_system(ReducedRegime::projector, n,
                                                           regime == Regime::laplacian ? 1.0 / H.N() : eta), 0, target);
        const Trajectory tr = full_lme(1.05 * t95);
        add_dynamics(t, rn, "lme", n, tr.times, tr.column("ground_overlap"));
        add_result(res.results, cfg, rn, n, "t95:lme", *first_crossing(tr, "ground_overlap", target), t95);
        if (regime == Regime::projector) {
          const RequiredSteps need = multitrace_required_steps(1.0 - target, H.N(), eta, cfg.tau);
          const CouplingSpec A = coupling(regime, n, eta);
          const Mat Lt = dilate(build_jump(H.energies, A.matrix, regime_filter(regime)).L).Lt;
          ChannelRun run;
          run.tau = cfg.tau;
          run.steps = static_cast<int>(need.steps);
          const Trajectory mt = iterate_channel(run, Lt, s0);
          add_dynamics(t, rn, "multi_trace", n, mt.times, mt.column("ground_overlap"));
          add_result(res.results, cfg, rn, n, "t95:multi_trace", need.time, std::nullopt);
        }
        break;
      }
      case Regime::bitflip: {
        const ReducedOdeSystem lme = reduced_system(ReducedRegime::shortrange_lme, n, eta);
        const ReducedOdeSystem pme = reduced_system(ReducedRegime::shortrange_pme, n, eta);
        for (const auto* sys : {&lme, &pme}) {
          const double t95 = reduced_crossing(*sys, 0, target);
          Trajectory tr;
          tr.times = linspace(0.0, 1.05 * t95, samples);
          std::vector<double> g;
          for (const RVec& z : evolve_reduced(*sys, tr.times)) g.push_back(z(0));
          tr.add_column("ground_overlap", std::move(g));
          truncate_at(tr, "ground_overlap", target);
          const std::string engine = sys == &lme ? "lme" : "pme";
          add_dynamics(t, rn, engine, n, tr.times, tr.column("ground_overlap"));
          add_result(res.results, cfg, rn, n, "t95:" + engine, t95, std::nullopt);
        }
        break;
      }
      case Regime::eth: {
        Trajectory tr;
        const double t95 = reduced_crossing(reduced_system(ReducedRegime::eth_mean, n, eta), 0, target);
        tr.times = linspace(0.0, 1.05 * t95, samples);
        std::vector<double> g;
        for (double x : tr.times) g.push_back(eth_mean_overlap(n, eta, x).first);
        tr.add_column("ground_overlap", std::move(g));
        truncate_at(tr, "ground_overlap", target);
        add_dynamics(t, rn, "mean_field", n, tr.times, tr.column("ground_overlap"));
        add_result(res.results, cfg, rn, n, "t95:mean_field", t95, std::nullopt);
        break;
      }
    }
    res.outputs.push_back({"fig2b_dynamics_" + rn, std::move(t)});
  }
  return res;
}

// --- table1_summary --------------------------------------------------------

ScenarioResult run_table1(const ScenarioConfig& cfg) {
  ExponentOptions opt;
  opt.seed = cfg.seed.value_or(opt.seed);
  opt.eps_prime = cfg.eps_prime;
  opt.sqrt_tau = std::sqrt(cfg.tau);
  opt.threads = cfg.threads;
  const bool want_eth = std::find(cfg.regimes.begin(), cfg.regimes.end(), Regime::eth) != cfg.regimes.end();
  ScenarioResult res;
  res.results.header = schema::results;
  CsvTable t;
  t.header = {"regime", "engine", "n_min", "n_max", "slope", "expected", "tolerance"};
  for (const ExponentRow& row : table1_exponents(opt)) {
    if (row.regime == "eth" && !want_eth) continue;
    const Regime r = regime_from_string(row.regime);
    if (std::find(cfg.regimes.begin(), cfg.regimes.end(), r) == cfg.regimes.end()) continue;
    t.add_row({row.regime, row.engine, fmt(row.n_min), fmt(row.n_max), fmt(row.slope), fmt(row.expected),
               fmt(row.tolerance)});
    add_result(res.results, cfg, row.regime, row.n_max, "slope:" + row.engine, row.slope, row.expected);
  }
  res.outputs.push_back({"table1_summary", std::move(t)});
  return res;
}

// --- trotter_slope ---------------------------------------------------------

ScenarioResult run_trotter(const ScenarioConfig& cfg) {
  const int n = cfg.n_min;
  check_cap(n <= kMaxDenseSuperopQubits, "trotter_slope: limited to n <= 6");
  std::vector<double> taus;
  for (int k = 0; k < 7; ++k) taus.push_back(std::pow(10.0, -2.5 + 0.25 * k));
  const TrotterSweep sw = trotter_error_sweep(n, cfg.p, cfg.r, taus);
  ScenarioResult res;
  res.results.header = schema::results;
  CsvTable t;
  t.header = schema::trotter_slope;
  for (std::size_t k = 0; k < taus.size(); ++k) t.add_row({fmt(cfg.p), fmt(cfg.r), fmt(taus[k]), fmt(sw.errors[k])});
  add_result(res.results, cfg, "projector", n, "trotter_slope", sw.slope, cfg.p / 2.0 + 1.0);
  add_result(res.results, cfg, "projector", n, "discretization_error", sw.discretization.refined_error, std::nullopt);
  res.outputs.push_back({"trotter_slope_projector", std::move(t)});
  return res;
}

// --- prop1_invariance ------------------------------------------------------

ScenarioResult run_prop1(const ScenarioConfig& cfg) {
  check_cap(cfg.n_max <= kMaxMatrixFreeQubits, "prop1_invariance: limited to n <= 7");
  ScenarioResult res;
  res.results.header = schema::results;
  CsvTable t;
  t.header = {"regime", "n", "N", "eta_multiplier", "eta", "norm_A", "mixing_time", "normA2_times_mixing_time"};
  std::vector<std::pair<int, double>> points;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n)
    for (double m : cfg.eta_multipliers) points.emplace_back(n, m);
  struct P1 {
    double eta, normA, T;
  };
  const auto vals = parallel_map(static_cast<int>(points.size()), cfg.threads, [&](int k) {
    const auto [n, m] = points[k];
    const double eta = m / std::ldexp(1.0, n);
    const CouplingSpec A = coupling(Regime::projector, n, eta);
    return P1{eta, spectral_norm(A.matrix), lindblad_rate(regime_generator(Regime::projector, n, eta, std::nullopt)).mixing_time()};
  });
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto [n, m] = points[k];
    const double prod = vals[k].normA * vals[k].normA * vals[k].T;
    t.add_row({"projector", fmt(n), fmt(static_cast<long long>(dim_of(n))), fmt(m), fmt(vals[k].eta), fmt(vals[k].normA),
               fmt(vals[k].T), fmt(prod)});
    add_result(res.results, cfg, "projector", n, "normA2_Tmix:x" + fmt(m), prod, std::nullopt);
  }
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    const GroverHamiltonian H = grover_hamiltonian(n, {0});
    const double eta = 1.0 / std::sqrt(H.N() - 1.0);
    const Mat L = build_jump(H.energies, coupling(Regime::projector, n, eta).matrix, regime_filter(Regime::projector)).L;
    add_result(res.results, cfg, "projector", n, "norm_L_at_eta_inv_sqrt_Nm1", spectral_norm(L), 1.0);
  }
  res.outputs.push_back({"prop1_invariance_projector", std::move(t)});
  return res;
}

// --- appendixE -------------------------------------------------------------

ScenarioResult run_appendix_e(const ScenarioConfig& cfg) {
  ScenarioResult res;
  res.results.header = schema::results;
  CsvTable t;
  t.header = {"epsilon", "phi", "include_hamiltonian", "diagonal_deviation", "offdiagonal_magnitude",
              "expansion_diagonal", "expansion_offdiagonal", "distance_to_ground"};
  for (double e : cfg.epsilons)
    for (double f : cfg.phis)
      for (bool h : {false, true}) {
        const AppendixEReport r = appendix_e_study(e, f, h);
        t.add_row({fmt(e), fmt(f), h ? "1" : "0", fmt(r.diagonal_deviation), fmt(r.offdiagonal_magnitude),
                   fmt(r.expansion_diagonal), fmt(r.expansion_offdiagonal), fmt(r.distance_to_ground)});
        if (!h) add_result(res.results, cfg, "appendixE", 1, "diag_dev:eps=" + fmt(e) + ",phi=" + fmt(f),
                           r.diagonal_deviation, r.expansion_diagonal);
      }
  res.outputs.push_back({"appendixE", std::move(t)});
  return res;
}

// --- greedy_census ---------------------------------------------------------

ScenarioResult run_greedy(const ScenarioConfig& cfg) {
  check_cap(cfg.n_max <= 20, "greedy_census: exhaustive census limited to n <= 20");
  ScenarioResult res;
  res.results.header = schema::results;
  CsvTable t;
  t.header = {"n", "model", "distance", "starts", "found", "flips_equal_distance"};
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    const std::uint64_t g = 1;
    for (EnergyModel model : {EnergyModel::hamming_ladder, EnergyModel::flat_grover}) {
      const EnergyOracle oracle = energy_oracle(model, n, g);
      std::vector<long long> starts(n + 1, 0), found(n + 1, 0), exact(n + 1, 0);
      for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        const int d = popcount(x ^ g);
        const GreedyRun run = greedy_search(n, oracle, x, g);
        ++starts[d];
        found[d] += run.found;
        exact[d] += static_cast<int>(run.flips.size()) == d;
      }
      const std::string mn = model == EnergyModel::hamming_ladder ? "hamming_ladder" : "flat_grover";
      for (int d = 0; d <= n; ++d) t.add_row({fmt(n), mn, fmt(d), fmt(starts[d]), fmt(found[d]), fmt(exact[d])});
      long long total_found = 0;
      for (int d = 0; d <= n; ++d) total_found += found[d];
      add_result(res.results, cfg, mn, n, "found_fraction", static_cast<double>(total_found) / std::ldexp(1.0, n),
                 std::nullopt);
    }
  }
  res.outputs.push_back({"greedy_census", std::move(t)});
  return res;
}

// --- singletrace_speedup ---------------------------------------------------

ScenarioResult run_singletrace(const ScenarioConfig& cfg) {
  check_cap(cfg.n_max <= 60, "singletrace_speedup: limited to n <= 60");
  ScenarioResult res;
  res.results.header = schema::results;
  CsvTable t;
  t.header = {"n", "N", "T_single_trace", "T_multi_trace", "multi_trace_steps", "laurent_T_multi_trace"};
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    const int N = static_cast<int>(dim_of(n));
    const double eta = eta_value(cfg.eta_rule, Regime::projector, n, cfg.eta);
    const double Ts = singletrace_time(N, eta, cfg.eps_prime);
    const RequiredSteps m = multitrace_required_steps(cfg.eps_prime, N, eta, cfg.tau);
    t.add_row({fmt(n), fmt(N), fmt(Ts), fmt(m.time), fmt(m.steps), fmt(m.laurent_time)});
    add_result(res.results, cfg, "projector", n, "speedup_ratio", m.time / Ts, std::nullopt);
  }
  res.outputs.push_back({"singletrace_speedup_projector", std::move(t)});
  return res;
}

}  // namespace

std::vector<ExponentRow> table1_exponents(const ExponentOptions& opt) {
  std::vector<ExponentRow> rows;
  auto finish = [&](ExponentRow row) {
    row.slope = loglog_fit(row.N, row.T).slope;
    rows.push_back(std::move(row));
  };
  std::vector<int> ns;
  for (int n = 2; n <= 7; ++n) ns.push_back(n);

  {
    // ETH: population-sector rate of the sample-mean generator.
    ExponentRow row{"eth", "lme_sample_mean", 2, 7, 0.0, 1.0, 0.1, {}, {}};
    const auto T = parallel_map(static_cast<int>(ns.size()), opt.threads, [&](int k) {
      const int n = ns[k];
      const double N = std::ldexp(1.0, n);
      const LindbladGenerator G = eth_sample_mean_generator(n, 1.0 / std::sqrt(N), opt.eth_samples_per_N * static_cast<int>(N), opt.seed);
      return observable_sector_rate(G, ground_projector(G.dim(), 0)).mixing_time();
    });
    for (std::size_t k = 0; k < ns.size(); ++k) {
      row.N.push_back(std::ldexp(1.0, ns[k]));
      row.T.push_back(T[k]);
    }
    finish(row);
  }
  {
    ExponentRow lme{"projector", "lme", 2, 7, 0.0, 1.0, 0.05, {}, {}};
    ExponentRow dlme{"projector", "dlme", 2, 7, 0.0, 2.0, 0.1, {}, {}};
    ExponentRow pme{"projector", "pme", 2, 7, 0.0, 1.0, 0.05, {}, {}};
    const auto T = parallel_map(static_cast<int>(ns.size()), opt.threads, [&](int k) {
      const int n = ns[k];
      const double eta = 1.0 / std::ldexp(1.0, n);
      const GroverHamiltonian H = grover_hamiltonian(n, {0});
      const CouplingSpec A = coupling(Regime::projector, n, eta);
      const FilterFunction f = regime_filter(Regime::projector);
      const LindbladGenerator G(H.matrix(), {build_jump(H.energies, A.matrix, f).L}, false);
      return std::array<double, 3>{lindblad_rate(G).mixing_time(),
                                   1.0 / std::abs(rate_matrix_gap(dlme_rates(H.energies, A.matrix, f))),
                                   1.0 / std::abs(rate_matrix_gap(pme_rates(H.energies, A.matrix)))};
    });
    for (std::size_t k = 0; k < ns.size(); ++k) {
      const double N = std::ldexp(1.0, ns[k]);
      for (ExponentRow* r : {&lme, &dlme, &pme}) r->N.push_back(N);
      lme.T.push_back(T[k][0]);
      dlme.T.push_back(T[k][1]);
      pme.T.push_back(T[k][2]);
    }
    finish(lme);
    finish(dlme);
    finish(pme);
  }
  {
    ExponentRow lme{"bitflip", "lme_reduced", opt.shortrange_n_min, opt.shortrange_n_max, 0.0, 1.0, 0.1, {}, {}};
    ExponentRow pme{"bitflip", "pme_reduced", opt.shortrange_n_min, opt.shortrange_n_max, 0.0, 1.0, 0.1, {}, {}};
    const int count = opt.shortrange_n_max - opt.shortrange_n_min + 1;
    const auto T = parallel_map(count, opt.threads, [&](int k) {
      const int n = opt.shortrange_n_min + k;
      return std::array<double, 2>{
          reduced_mixing_rate(reduced_system(ReducedRegime::shortrange_lme, n, 1.0 / n)).mixing_time(),
          reduced_mixing_rate(reduced_system(ReducedRegime::shortrange_pme, n, 1.0 / n)).mixing_time()};
    });
    for (int k = 0; k < count; ++k) {
      const double N = std::ldexp(1.0, opt.shortrange_n_min + k);
      lme.N.push_back(N);
      pme.N.push_back(N);
      lme.T.push_back(T[k][0]);
      pme.T.push_back(T[k][1]);
    }
    finish(lme);
    finish(pme);
  }
  {
    ExponentRow multi{"projector", "multi_trace", 2, 10, 0.0, 1.0, 0.05, {}, {}};
    ExponentRow single{"projector", "single_trace", 2, 10, 0.0, 0.5, 0.05, {}, {}};
    const double tau = opt.sqrt_tau * opt.sqrt_tau;
    for (int n = 2; n <= 10; ++n) {
      const int N = static_cast<int>(dim_of(n));
      const double eta = 1.0 / N;
      multi.N.push_back(N);
      single.N.push_back(N);
      multi.T.push_back(multitrace_required_steps(opt.eps_prime, N, eta, tau).time);
      single.T.push_back(singletrace_time(N, eta, opt.eps_prime));
    }
    finish(multi);
    finish(single);
  }
  return rows;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  validate_config(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  ScenarioResult res;
  switch (cfg.scenario) {
    case ScenarioKind::fig2a_scaling: res = run_fig2a(cfg); break;
    case ScenarioKind::fig2b_dynamics: res = run_fig2b(cfg); break;
    case ScenarioKind::table1_summary: res = run_table1(cfg); break;
    case ScenarioKind::trotter_slope: res = run_trotter(cfg); break;
    case ScenarioKind::prop1_invariance: res = run_prop1(cfg); break;
    case ScenarioKind::appendixE: res = run_appendix_e(cfg); break;
    case ScenarioKind::greedy_census: res = run_greedy(cfg); break;
    case ScenarioKind::singletrace_speedup: res = run_singletrace(cfg); break;
  }
  res.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

ScenarioResult run_and_write(const ScenarioConfig& cfg) {
  ScenarioResult res = run_scenario(cfg);
  const std::filesystem::path out(cfg.out);
  std::filesystem::create_directories(out);
  nlohmann::json files = nlohmann::json::array();
  for (const ScenarioOutput& o : res.outputs) {
    emit_csv(o.table, out / (o.name + ".csv"));
    files.push_back(o.name + ".csv");
  }
  const std::string results_name = "results_" + to_string(cfg.scenario) + ".csv";
  emit_csv(res.results, out / results_name);
  files.push_back(results_name);

  // Timing lives here so that the CSV files stay byte-identical across runs.
  const std::filesystem::path manifest_path = out / "manifest.json";
  nlohmann::json manifest = nlohmann::json::object();
  if (std::filesystem::exists(manifest_path)) {
    std::ifstream in(manifest_path);
    try {
      in >> manifest;
    } catch (const nlohmann::json::exception&) {
      manifest = nlohmann::json::object();
    }
  }
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  manifest[to_string(cfg.scenario)] = {
      {"config_hash", config_hash(cfg)},
      {"seed", cfg.seed ? nlohmann::json(*cfg.seed) : nlohmann::json(nullptr)},
      {"runtime_ms", res.runtime_ms},
      {"timestamp", stamp},
      {"threads", cfg.threads},
      {"files", files},
      {"config", emit_config(cfg)},
  };
  std::ofstream(manifest_path) << manifest.dump(2) << "\n";
  return res;
}

}  // namespace dissearch
