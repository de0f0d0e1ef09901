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

#include <utility>
#include <vector>

#include "dissearch/common.hpp"
#include "dissearch/model.hpp"

namespace dissearch {

// L_ij = gammahat(lambda_i - lambda_j) A_ij in the energy eigenbasis.
struct JumpOperator {
  Mat L;
};

JumpOperator build_jump(const RVec& energies, const Mat& A, const FilterFunction& filter);

// Ancilla is the leading tensor factor: Lt = |0><1| (x) L^dag + |1><0| (x) L.
struct DilatedOperator {
  Mat Lt;
  int N = 0;
};

DilatedOperator dilate(const Mat& L);

struct Discretization {
  double M_s = 0.0;
  double mu = 0.0;
};

struct DiscretizationInputs {
  double gap = 1.0;       // Delta
  double M_omega = 1.5;   // spectral window covered by the filter
  double norm_A = 1.0;
  double norm_H = 1.0;
  double eps_s = 1e-3;
  double Z = 4.0;
  double C = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
};

// M_s = c1 / Delta * (C M_omega ||A|| / (Delta eps_s))^{1/(Z-1)},
// mu  = c2 / (||H|| + M_omega + log(C M_omega ||A|| / (Delta eps_s))).
Discretization select_discretization(const DiscretizationInputs& in);

struct JumpTerm {
  int l = 0;
  cplx weight;  // gamma(l mu) * mu
};

struct DiscretizedJump {
  double M_s = 0.0;
  double mu = 0.0;
  int M_mu = 0;
  std::vector<JumpTerm> terms;
  RVec energies;  // H is diagonal, so A(s) = e^{iHs} A e^{-iHs} is a phase conjugation
  Mat A;
  Mat Ls;

  // A(l mu) for one term.
  Mat heisenberg(int l) const;
};

DiscretizedJump discretize_jump(const RVec& energies, const Mat& A, const KernelGrid& grid);

// The raw selector with c1 = c2 = 1, followed by growing M_s by `growth`
// until ||L - L_s|| <= eps_s or max_rounds is reached.
struct RefinedDiscretization {
  Discretization raw;
  Discretization refined;
  double raw_error = 0.0;
  double refined_error = 0.0;
  int rounds = 0;
  bool converged = false;
  DiscretizedJump jump;
};

RefinedDiscretization refine_discretization(const RVec& energies, const Mat& A, const FilterFunction& filter,
                                            const DiscretizationInputs& in, double growth = 1.25,
                                            int max_rounds = 12);

// Suzuki product formulas as a flat factor list (term index, coefficient).
struct TrotterCircuit {
  int p = 2;
  int r = 1;
  int stages = 0;
  std::vector<std::pair<int, double>> factors;
};

TrotterCircuit trotter_circuit(int term_count, int p, int r);

// W(tau) = (prod of exp(-i b Ht_l sqrt(tau)/r))^r with Ht_l = sigmat_l (x) A(l mu).
Mat trotter_step(const DiscretizedJump& dj, double tau, int p, int r);

// Exact exp(-i Lt sqrt(tau)) for a dilation, built from the SVD of L.
Mat dilation_unitary(const Mat& L, double sqrt_tau);

// Tr_a(W (|0><0| (x) rho) W^dag).
Mat channel_from_unitary(const Mat& W, const Mat& rho);

struct CostReport {
  double tau = 0.0;
  long long steps = 0;  // N = ceil(T / tau)
  double T_H = 0.0;
  double N_A = 0.0;     // controlled-A count T_H / mu, when mu > 0
  bool first_branch_active = false;
};

enum class CostMode { lindblad, discrete };

// lindblad: tau = min(||L||^-4 T^-1 eps, ||A||^{-2-4/p} T^{-2/p} eps^{2/p});
// discrete: only the second argument.
CostReport cost_model(double norm_L, double norm_A, double T, double eps, int p, CostMode mode, double mu = 0.0);

}  // namespace dissearch
