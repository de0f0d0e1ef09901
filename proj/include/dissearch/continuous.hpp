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
#include <string>
#include <utility>
#include <vector>

#include "dissearch/common.hpp"
#include "dissearch/linops.hpp"
#include "dissearch/model.hpp"
#include "dissearch/ode.hpp"

namespace dissearch {

struct Trajectory {
  std::vector<double> times;
  std::vector<std::pair<std::string, std::vector<double>>> series;
  std::vector<Mat> states;  // filled only when requested

  std::string regime;
  std::string engine;
  int n = 0;
  double eta = 0.0;
  std::optional<std::uint64_t> seed;

  const std::vector<double>& column(const std::string& name) const;
  std::vector<double>& column_mut(const std::string& name);
  void add_column(const std::string& name, std::vector<double> values);
  bool has_column(const std::string& name) const;
};

// First time at which the named column reaches `target`, linearly
// interpolated between grid points; nullopt if never reached.
std::optional<double> first_crossing(const Trajectory& tr, const std::string& column, double target);

// Drop samples after the first grid point at or above `target`.
void truncate_at(Trajectory& tr, const std::string& column, double target);

// The filter that defines each transition regime: ideal_step for eth and
// projector, ideal_step_with_zero for bitflip and laplacian (those need
// transitions inside the degenerate excited manifold).
FilterFunction regime_filter(Regime r);

enum class LmeEngine { automatic, exact, rk45 };

struct LmeOptions {
  bool include_hamiltonian = false;
  LmeEngine engine = LmeEngine::automatic;  // exact for n <= 4, rk45 otherwise
  bool keep_states = false;
  OdeTolerance tol{};
  int ground = 0;
};

// Generic engine over explicit jump operators.
Trajectory evolve_lme(const Mat& H, const std::vector<Mat>& jumps, const DensityMatrix& rho0,
                      const std::vector<double>& times, const LmeOptions& opt = {});

Trajectory evolve_lme(const GroverHamiltonian& H, const CouplingSpec& A, const FilterFunction& filter,
                      const DensityMatrix& rho0, const std::vector<double>& times, LmeOptions opt = {});

// dp_i/dt = sum_j gh_ij^2 |A_ij|^2 p_j - sum_j gh_ji^2 |A_ji|^2 p_i.
RMat dlme_rates(const RVec& energies, const Mat& A, const FilterFunction& filter);
Trajectory evolve_dlme(const RVec& energies, const Mat& A, const FilterFunction& filter, const RVec& p0,
                       const std::vector<double>& times, int ground = 0);

// Renormalized rates Abar_ij = |A_ij| for allowed transitions j -> i, diagonal
// fixed by probability conservation.
RMat pme_rates(const RVec& energies, const Mat& A, const FilterFunction& mask = make_filter(FilterKind::ideal_step_with_zero));
Trajectory evolve_pme(const RMat& Abar, const RVec& p0, const std::vector<double>& times, int ground = 0);

// Spectral gap of a classical rate matrix.
double rate_matrix_gap(const RMat& R, double zero_tol = -1.0);

// Random diagonal shifts of size delta that lift the degeneracy of H.
RVec perturbed_energies(const RVec& energies, double delta, std::uint64_t seed);

enum class ReducedRegime { eth_mean, projector, shortrange_lme, shortrange_pme };
enum class ShortRangeVariant { corrected, as_printed };

std::string to_string(ReducedRegime r);
ReducedRegime reduced_regime_from_string(const std::string& s);

struct ReducedOdeSystem {
  std::vector<std::string> labels;
  RMat coeff;
  RVec init;  // z(0) for rho(0) = |s><s|
  ReducedRegime regime = ReducedRegime::projector;
  int n = 0;
  double eta = 0.0;
  // For shortrange_lme: (row layer, column layer) of each variable.
  std::vector<std::pair<int, int>> layers;
};

ReducedOdeSystem reduced_system(ReducedRegime regime, int n, double eta,
                                ShortRangeVariant variant = ShortRangeVariant::corrected);

// Maps a full density matrix (or population vector) to the reduced variables.
RVec reduce_state(const ReducedOdeSystem& sys, const Mat& rho, int ground = 0);
RVec reduce_populations(const ReducedOdeSystem& sys, const RVec& p, int ground = 0);

struct ReducedRate {
  double rate = 0.0;  // Re alpha* (negative)
  cplx alpha_star;
  double zero_tol = 0.0;
  double mixing_time() const { return 1.0 / std::abs(rate); }
};

// Default zero_tol is 1e-13 * ||coeff||: the physical gaps at n ~ 30 are of
// order 1e-9 * ||coeff||.
ReducedRate reduced_mixing_rate(const ReducedOdeSystem& sys, double zero_tol = -1.0);

std::vector<RVec> evolve_reduced(const ReducedOdeSystem& sys, const std::vector<double>& times, OdeTolerance tol = {});
std::vector<RVec> evolve_reduced_expm(const ReducedOdeSystem& sys, const std::vector<double>& times);

// Tr((I - P_sym) rho), with P_sym the projector onto the Dicke states built
// from the Hamming layers around the ground string.
double symmetric_leakage(const Mat& rho, int n, int ground = 0);

// ETH mean-field closed form: (E z_g(t), E z_e^D(t)) from (z_g(0), z_e^D(0)).
std::pair<double, double> eth_mean_overlap(int n, double eta, double t);

struct EthMonteCarloOptions {
  int samples = 500;
  std::uint64_t seed = 0;
  double resample_interval = 0.002;  // the rate bias is about (N-1) eta^2 interval / 2, relative
};

// Mean and 3-sigma band of rho_gg over independent samples; each sample
// redraws the coupling every resample_interval and propagates with one RK4 step
// per interval. Columns: mean, stderr, lower, upper.
Trajectory eth_monte_carlo(int n, double eta, const std::vector<double>& times, const EthMonteCarloOptions& opt);

// Least-squares decay rate of 1 - z_g(t) fitted on a log scale.
double fitted_decay_rate(const std::vector<double>& times, const std::vector<double>& zg, double zg0);

// Exact ensemble average of the ETH Lindbladian (ideal_step filter, GUE
// couplings scaled by eta). Jumps are eta * gh_aj |a><j|.
LindbladGenerator eth_expected_generator(int n, double eta, int ground = 0);

// Sample average of S fixed-coupling Lindbladians, compressed to at most N^2
// jump operators through an SVD of the stacked vec(L_s).
LindbladGenerator eth_sample_mean_generator(int n, double eta, int samples, std::uint64_t seed, int ground = 0);

// Jump operators whose dissipator sum equals the average of D[L_s].
std::vector<Mat> average_dissipators(const std::vector<Mat>& jumps);

struct MeanGeneratorCheck {
  int entries = 0;
  double max_abs_z = 0.0;   // over entries where the exact expected generator vanishes
  double z_bound = 0.0;     // extreme-value bound sqrt(2 log(2 entries)) + 1
  double max_dev_z = 0.0;   // over all entries, against the exact expected generator
  bool ok = false;
};

MeanGeneratorCheck eth_mean_generator_check(int n, double eta, int samples, std::uint64_t seed);

struct CoherenceSplit {
  std::vector<double> zD;  // sum of excited populations
  std::vector<double> zO;  // sum of excited-block coherences
};

CoherenceSplit coherence_split_projector(const std::vector<Mat>& states, int ground = 0);

// max |d zD/dt + eta^2 (zD + zO)| with central differences of step dt.
double coherence_identity_residual(const GroverHamiltonian& H, const CouplingSpec& A, const DensityMatrix& rho0,
                                   const std::vector<double>& times, double dt);

struct AppendixEReport {
  double epsilon = 0.0;
  double phi = 0.0;
  bool include_hamiltonian = false;
  double gap = 1.0;
  Mat steady_state;
  int steady_dimension = 0;
  double diagonal_deviation = 0.0;     // 1 - rho_gg
  double offdiagonal_magnitude = 0.0;  // |rho_eg|
  double expansion_diagonal = 0.0;     // eps^2 / 17 + phi^2
  double expansion_offdiagonal = 0.0;  // |eps (1/(1-4i) + phi/(1+4i))|
  double distance_to_ground = 0.0;     // trace distance ||rho - |g><g| ||_1
};

AppendixEReport appendix_e_study(double epsilon, double phi, bool include_hamiltonian, double gap = 1.0);

}  // namespace dissearch
