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

#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dissearch/common.hpp"

namespace dissearch {

struct GroverHamiltonian {
  int n = 0;
  std::vector<int> marked;
  double gap = 1.0;
  RVec energies;  // diagonal in the computational basis, which is also the energy basis

  int N() const { return static_cast<int>(energies.size()); }
  Mat matrix() const;
  int ground() const { return marked.front(); }
};

GroverHamiltonian grover_hamiltonian(int n, std::vector<int> marked, double gap = 1.0);

enum class Regime { eth, projector, bitflip, laplacian };

std::string to_string(Regime r);
Regime regime_from_string(const std::string& s);

struct CouplingSpec {
  Regime regime = Regime::projector;
  double eta = 0.0;
  int n = 0;
  std::optional<std::uint64_t> seed;
  int ground = 0;  // the absorbing vertex of the laplacian regime
  Mat matrix;
};

// ETH couplings are drawn from a GUE-style ensemble: real N(0,1) diagonal and
// complex normal off-diagonals with total variance 1, scaled by eta.
CouplingSpec coupling(Regime regime, int n, double eta, std::optional<std::uint64_t> seed = std::nullopt,
                      int ground = 0);
Mat sample_gue(int N, std::mt19937_64& rng);

enum class FilterKind { ideal_step, ideal_step_with_zero, erf_window, custom_table };

struct ErfWindow {
  double slope = 4.0;
  double upper = 4.8;  // erf(slope*w + upper)
  double lower = 3.2;  // erf(slope*w + lower)
};

struct FilterFunction {
  FilterKind kind = FilterKind::ideal_step;
  ErfWindow erf;
  // custom_table: (omega, value) pairs sorted by omega, linearly interpolated,
  // zero outside the table.
  std::vector<std::pair<double, double>> table;

  double operator()(double omega) const;
};

FilterFunction make_filter(FilterKind kind, ErfWindow params = {});
FilterFunction make_table_filter(std::vector<std::pair<double, double>> table);

struct KernelWindow {
  double omega_lo;
  double omega_hi;
  double d_omega = 1e-3;
};

// Quadrature window [-M_omega - 2, 2] used by default.
KernelWindow default_kernel_window(double M_omega);

// gamma(s) = (1/2pi) int gammahat(w) e^{-i w s} dw, midpoint rule over the window.
cplx kernel_value(const FilterFunction& f, double s, const KernelWindow& w);

struct KernelGrid {
  double M_s = 0.0;
  double mu = 0.0;
  int M_mu = 0;                // grid indices run over [-M_mu, M_mu]
  std::vector<cplx> values;    // values[l + M_mu] = gamma(l mu)
  cplx at(int l) const { return values.at(static_cast<std::size_t>(l + M_mu)); }
};

KernelGrid kernel(const FilterFunction& f, double M_s, double mu, const KernelWindow& w);

struct EthMomentReport {
  int samples = 0;
  double eta = 0.0;
  double K = 0.0;
  double row_second_sup = 0.0;     // sup_i sum_j E|A_ij|^2
  double col_second_sup = 0.0;     // sup_j sum_i E|A_ij|^2
  double fourth_sum = 0.0;         // sum_ij E|A_ij|^4
  double inferred_K = 0.0;         // smallest K satisfying all three bounds
  double mean_spectral_norm = 0.0; // E||A||
  double max_entry_mean_z = 0.0;   // largest |mean_ij| in units of its standard error
  bool second_moment_ok = false;   // both sup bounds <= K^2 N
  bool fourth_moment_ok = false;   // fourth_sum <= K^4 N^2
};

// Empirical moments of the realized (eta-scaled) ETH coupling against the
// bounds K^2 N and K^4 N^2. Throws for fewer than 30 samples.
EthMomentReport check_eth_moments(int n, double eta, int samples, std::uint64_t seed, double K = 1.5);

}  // namespace dissearch
