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

#include "dissearch/common.hpp"
#include "dissearch/continuous.hpp"
#include "dissearch/jump.hpp"
#include "dissearch/linops.hpp"

namespace dissearch {

enum class TraceMode { multi_trace, single_trace };
enum class ChannelEngine { exact_exponential, trotterized };

struct ChannelRun {
  double tau = 1.0;  // each step applies exp(-i Lt sqrt(tau))
  int steps = 1;
  TraceMode mode = TraceMode::multi_trace;
  ChannelEngine engine = ChannelEngine::exact_exponential;
  int p = 2;  // Trotter order, trotterized engine only
  int r = 1;  // Trotter steps per application

  double total_time() const;
  void validate() const;
};

struct ClosedFormParams {
  int N = 2;
  double eta = 0.5;
  double tau = 1.0;

  double Ntilde() const;
  double zeta() const;
};

// Tr_a(exp(-i Lt sqrt(tau)) (|0><0| (x) sigma) exp(i Lt sqrt(tau))), with the
// exponential from a Hermitian eigendecomposition of Lt.
DensityMatrix channel_step(const DensityMatrix& sigma, const Mat& Lt, double tau);

// exp(-i Lt sqrt(tau)) by Hermitian eigendecomposition.
Mat dilated_exponential(const Mat& Lt, double tau);

// sigma_m for m = 0..steps under a fixed dilated unitary.
Trajectory iterate_unitary(const Mat& W, const DensityMatrix& sigma0, int steps, int ground = 0, bool keep_states = false);

// Exact engine: W from Lt. Trotterized engine: needs the discretized jump `dj`.
Trajectory iterate_channel(const ChannelRun& run, const Mat& Lt, const DensityMatrix& sigma0, int ground = 0,
                           bool keep_states = false, const DiscretizedJump* dj = nullptr);

// Projector regime after m steps (ground index `ground`). The geometric
// series degenerates to m when cos(zeta) = 1.
Mat multitrace_closed_form(const ClosedFormParams& p, int m, int ground = 0);
double multitrace_overlap(const ClosedFormParams& p, int m);

struct RequiredSteps {
  long long steps = 0;          // exact inversion of the overlap law
  double time = 0.0;            // steps * sqrt(tau)
  double laurent_time = 0.0;    // log(1/eps') (1/(eta^2 (N-1) sqrt(tau)) - sqrt(tau)/6)
  double laurent_steps = 0.0;   // laurent_time / sqrt(tau)
};

RequiredSteps multitrace_required_steps(double eps_prime, int N, double eta, double tau);

double singletrace_overlap(int N, double eta, double T);

// Smallest T with singletrace_overlap >= 1 - eps'.
double singletrace_time(int N, double eta, double eps_prime);

struct SingleTraceCost {
  double sqrt_tau = 0.0;  // (pi/2) / (eta sqrt(N-1)) with eta = 1/N, i.e. ||A|| = 1
  double r_real = 0.0;    // before rounding
  long long r = 0;
  double T_H = 0.0;       // sqrt(tau) * r
};

// r = ceil((sqrt(tau) ||A||)^{1 + 1/(p+1)} eps^{-1/(p+1)}).
SingleTraceCost singletrace_cost(int N, double eps, int p, double norm_A = 1.0);

// Projector coupling (eta = 1/N) with the erf filter, discretized by
// refine_discretization. The error is the trace norm of the difference of
// the exact and Trotterized channel outputs on |s><s|; the exact side uses
// exp(-i Lt_s sqrt(tau)) of the same discretized jump.
struct TrotterSweep {
  int n = 0;
  int p = 2;
  int r = 1;
  std::vector<double> taus;
  std::vector<double> errors;
  double slope = 0.0;
  RefinedDiscretization discretization;
};

TrotterSweep trotter_error_sweep(int n, int p, int r, const std::vector<double>& taus);

// End-to-end single-trace run: T = (pi/2) / ||L_s||, r from singletrace_cost.
struct SingleTraceCheck {
  int n = 0;
  double T = 0.0;
  long long r = 0;
  double overlap_exact = 0.0;
  double overlap_trotter = 0.0;
  double error = 0.0;
};

SingleTraceCheck singletrace_trotter_check(int n, int p, double eps);

// Row-stochastic walk mu_{t+1} = mu_t P.
Trajectory classical_walk(const RMat& P, const RVec& mu0, int steps, int ground = 0);

// From g stay; from any other vertex move to each of the other N-1 vertices
// with probability 1/(N-1).
RMat absorbing_walk_matrix(int N, int ground = 0);

// mu_g after `steps` from the uniform start: 1 - (N-1)/N ((N-2)/(N-1))^steps.
double absorbing_walk_overlap(int N, long long steps);

}  // namespace dissearch
