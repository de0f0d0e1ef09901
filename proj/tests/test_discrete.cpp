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

#include <cmath>
#include <numbers>

#include "dissearch/discrete.hpp"

using namespace dissearch;

namespace {

Mat projector_dilation(int n, double eta) {
  const GroverHamiltonian H = grover_hamiltonian(n, {0});
  return dilate(build_jump(H.energies, coupling(Regime::projector, n, eta).matrix, make_filter(FilterKind::ideal_step)).L).Lt;
}

}  // namespace

TEST_CASE("eigendecomposition and SVD routes give the same dilated unitary") {
  const GroverHamiltonian H = grover_hamiltonian(3, {0});
  const Mat L = build_jump(H.energies, coupling(Regime::bitflip, 3, 0.4).matrix, make_filter(FilterKind::ideal_step_with_zero)).L;
  for (double tau : {0.01, 0.7, 3.0}) CHECK((dilated_exponential(dilate(L).Lt, tau) - dilation_unitary(L, std::sqrt(tau))).norm() < 1e-12);
}

TEST_CASE("multi-trace closed form equals the iterated channel") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.05, 4.0);
  for (int n = 2; n <= 4; ++n) {
    const int N = 1 << n;
    for (int trial = 0; trial < 5; ++trial) {
      const double tau = u(rng);
      const double eta = 1.0 / N;
      const Mat Lt = projector_dilation(n, eta);
      DensityMatrix sigma = DensityMatrix::uniform_superposition(N);
      const ClosedFormParams p{N, eta, tau};
      for (int m = 0; m <= 20; ++m) {
        CHECK(trace_distance(multitrace_closed_form(p, m), sigma.rho).one_norm < 1e-10);
        CHECK(multitrace_overlap(p, m) == doctest::Approx(sigma(0, 0).real()).epsilon(1e-10));
        sigma = channel_step(sigma, Lt, tau);
      }
    }
  }
}

TEST_CASE("closed form handles cos(zeta) = 1") {
  // zeta = eta sqrt(N-1) sqrt(tau) = 2 pi.
  const int N = 4;
  const double eta = 0.25;
  const double tau = std::pow(2.0 * std::numbers::pi / (eta * std::sqrt(3.0)), 2);
  const ClosedFormParams p{N, eta, tau};
  CHECK(std::cos(p.zeta()) == doctest::Approx(1.0));
  const Mat Lt = projector_dilation(2, eta);
  DensityMatrix sigma = DensityMatrix::uniform_superposition(N);
  for (int m = 0; m <= 6; ++m) {
    CHECK(trace_distance(multitrace_closed_form(p, m), sigma.rho).one_norm < 1e-9);
    sigma = channel_step(sigma, Lt, tau);
  }
  CHECK_THROWS_AS(multitrace_required_steps(0.05, N, eta, tau), InvalidArgument);
}

TEST_CASE("iterate_channel: exact and Trotterized engines, fixed point and times") {
  const int n = 2, N = 4;
  const double eta = 0.25;
  const Mat Lt = projector_dilation(n, eta);
  ChannelRun run;
  run.tau = 0.36;
  run.steps = 12;
  const Trajectory tr = iterate_channel(run, Lt, DensityMatrix::uniform_superposition(N), 0, true);
  CHECK(tr.times.size() == 13);
  CHECK(tr.times.back() == doctest::Approx(12 * 0.6));
  CHECK(run.total_time() == doctest::Approx(7.2));
  for (const Mat& s : tr.states) CHECK(std::abs(s.trace() - 1.0) < 1e-12);
  // The ground state is a fixed point of the step.
  const DensityMatrix g = DensityMatrix::basis_state(N, 0);
  CHECK(trace_distance(channel_step(g, Lt, 0.36), g).one_norm < 1e-12);
  // Steps must be positive and the Trotterized engine needs a discretized jump.
  run.steps = -1;
  CHECK_THROWS_AS(run.validate(), InvalidArgument);
  run.steps = 2;
  run.engine = ChannelEngine::trotterized;
  CHECK_THROWS_AS(iterate_channel(run, Lt, DensityMatrix::uniform_superposition(N)), InvalidArgument);
}

TEST_CASE("required multi-trace steps: exact inversion and Laurent estimate") {
  const RequiredSteps r = multitrace_required_steps(0.05, 8, 1.0 / 8, 1.0);
  CHECK(r.steps == 26);
  CHECK(r.time == doctest::Approx(26.0));
  CHECK(r.laurent_time == doctest::Approx(26.890263503091774).epsilon(1e-12));
  // The exact count is the first m with overlap >= 0.95.
  const ClosedFormParams p{8, 1.0 / 8, 1.0};
  CHECK(multitrace_overlap(p, 26) >= 0.95);
  CHECK(multitrace_overlap(p, 25) < 0.95);
}

TEST_CASE("single trace reaches the target exactly at (pi/2) / (eta sqrt(N-1))") {
  for (int n = 1; n <= 10; ++n) {
    const int N = 1 << n;
    const double eta = 1.0 / N;
    const double T = 0.5 * std::numbers::pi / (eta * std::sqrt(N - 1.0));
    CHECK(std::abs(singletrace_overlap(N, eta, T) - 1.0) < 1e-12);
    CHECK(singletrace_time(N, eta, 0.05) < T);
    CHECK(singletrace_overlap(N, eta, singletrace_time(N, eta, 0.05)) == doctest::Approx(0.95).epsilon(1e-9));
  }
  // Against the dilated unitary itself.
  const Mat Lt = projector_dilation(3, 1.0 / 8);
  const double T = 0.5 * std::numbers::pi / (std::sqrt(7.0) / 8);
  ChannelRun run;
  run.mode = TraceMode::single_trace;
  run.tau = T * T;
  const Trajectory tr = iterate_channel(run, Lt, DensityMatrix::uniform_superposition(8));
  CHECK(tr.column("ground_overlap").back() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("single-trace cost") {
  const SingleTraceCost c = singletrace_cost(64, 1e-2, 2);
  CHECK(c.sqrt_tau == doctest::Approx(0.5 * std::numbers::pi * 64 / std::sqrt(63.0)));
  // (sqrt(tau) ||A||)^{4/3} eps^{-1/3} = 137.04 for N = 64, p = 2.
  CHECK(c.r_real == doctest::Approx(std::pow(c.sqrt_tau, 4.0 / 3.0) * std::cbrt(100.0)).epsilon(1e-13));
  CHECK(c.r == 138);
  CHECK(c.T_H == doctest::Approx(c.sqrt_tau * 138));
  // Doubling ||A|| multiplies r by 2^{4/3}.
  CHECK(singletrace_cost(64, 1e-2, 2, 2.0).r_real == doctest::Approx(c.r_real * std::pow(2.0, 4.0 / 3.0)));
}

TEST_CASE("Trotter error sweep has slope p/2 + 1") {
  const TrotterSweep sw = trotter_error_sweep(3, 2, 1, {0.003, 0.01, 0.03, 0.1});
  CHECK(sw.slope == doctest::Approx(2.0).epsilon(0.05));
  CHECK(sw.errors.size() == 4);
  CHECK(sw.discretization.converged);
}

TEST_CASE("end-to-end Trotterized single trace at small n") {
  const SingleTraceCheck c = singletrace_trotter_check(3, 2, 1e-2);
  CHECK(c.error <= 1e-2);
  CHECK(c.overlap_exact == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("absorbing classical walk") {
  const int N = 8;
  const RMat P = absorbing_walk_matrix(N);
  CHECK(P(0, 0) == 1.0);
  CHECK(P(3, 3) == 0.0);
  CHECK(P(3, 5) == doctest::Approx(1.0 / 7));
  const Trajectory tr = classical_walk(P, RVec::Constant(N, 1.0 / N), 30);
  for (int t = 0; t <= 30; ++t)
    CHECK(tr.column("ground_overlap")[t] == doctest::Approx(absorbing_walk_overlap(N, t)).epsilon(1e-12));
  RMat bad = P;
  bad(3, 3) = 0.5;
  CHECK_THROWS_AS(classical_walk(bad, RVec::Constant(N, 1.0 / N), 3), InvalidArgument);
}
