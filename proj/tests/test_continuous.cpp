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

#include "dissearch/continuous.hpp"
#include "dissearch/jump.hpp"

using namespace dissearch;

namespace {

// Projector regime from |s><s|: z_g(t) = 1 - (N-1)/N exp(-(N-1) eta^2 t).
double projector_overlap(int N, double eta, double t) {
  return 1.0 - (N - 1.0) / N * std::exp(-(N - 1.0) * eta * eta * t);
}

}  // namespace

TEST_CASE("projector LME follows its closed form with both engines") {
  for (int n : {2, 3}) {
    const int N = 1 << n;
    const double eta = 1.0 / N;
    const GroverHamiltonian H = grover_hamiltonian(n, {0});
    const CouplingSpec A = coupling(Regime::projector, n, eta);
    const std::vector<double> times = linspace(0.0, 3.0 * N * N / (N - 1.0), 25);
    const DensityMatrix s = DensityMatrix::uniform_superposition(N);
    for (LmeEngine e : {LmeEngine::exact, LmeEngine::rk45}) {
      LmeOptions opt;
      opt.engine = e;
      const Trajectory tr = evolve_lme(H, A, regime_filter(Regime::projector), s, times, opt);
      const auto& g = tr.column("ground_overlap");
      const auto& trace = tr.column("trace");
      for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(g[k] == doctest::Approx(projector_overlap(N, eta, times[k])).epsilon(1e-8));
        CHECK(std::abs(trace[k] - 1.0) < 1e-9);
      }
    }
  }
}

TEST_CASE("the Hamiltonian part does not change projector populations") {
  const int n = 2, N = 4;
  const GroverHamiltonian H = grover_hamiltonian(n, {0});
  const CouplingSpec A = coupling(Regime::projector, n, 0.25);
  const std::vector<double> times = linspace(0.0, 10.0, 6);
  LmeOptions with_h;
  with_h.include_hamiltonian = true;
  const Trajectory a = evolve_lme(H, A, regime_filter(Regime::projector), DensityMatrix::uniform_superposition(N), times);
  const Trajectory b =
      evolve_lme(H, A, regime_filter(Regime::projector), DensityMatrix::uniform_superposition(N), times, with_h);
  for (std::size_t k = 0; k < times.size(); ++k)
    CHECK(a.column("ground_overlap")[k] == doctest::Approx(b.column("ground_overlap")[k]).epsilon(1e-10));
}

TEST_CASE("evolve_lme validates its inputs") {
  const GroverHamiltonian H = grover_hamiltonian(2, {0});
  const CouplingSpec A = coupling(Regime::projector, 2, 0.25);
  const DensityMatrix s = DensityMatrix::uniform_superposition(4);
  CHECK_THROWS_AS(evolve_lme(H, A, regime_filter(Regime::projector), s, {}), InvalidArgument);
  CHECK_THROWS_AS(evolve_lme(H, A, regime_filter(Regime::projector), s, {1.0, 0.5}), InvalidArgument);
  CHECK_THROWS_AS(evolve_lme(H, A, regime_filter(Regime::projector), DensityMatrix::uniform_superposition(8), {0.0}),
                  DimensionError);
}

TEST_CASE("DLME for the projector regime decays at eta^2") {
  const int n = 3, N = 8;
  const double eta = 1.0 / N;
  const GroverHamiltonian H = grover_hamiltonian(n, {0});
  const CouplingSpec A = coupling(Regime::projector, n, eta);
  const RMat R = dlme_rates(H.energies, A.matrix, regime_filter(Regime::projector));
  for (int j = 0; j < N; ++j) CHECK(std::abs(R.col(j).sum()) < 1e-15);
  CHECK(R(0, 3) == doctest::Approx(eta * eta));
  CHECK(R(3, 0) == 0.0);
  CHECK(rate_matrix_gap(R) == doctest::Approx(-eta * eta));

  const RVec p0 = RVec::Constant(N, 1.0 / N);
  const std::vector<double> times = linspace(0.0, 200.0, 11);
  const Trajectory tr = evolve_dlme(H.energies, A.matrix, regime_filter(Regime::projector), p0, times);
  for (std::size_t k = 0; k < times.size(); ++k)
    CHECK(tr.column("ground_overlap")[k] ==
          doctest::Approx(1.0 - (N - 1.0) / N * std::exp(-eta * eta * times[k])).epsilon(1e-8));
}

TEST_CASE("PME rates are the renormalized |A_ij| and conserve probability") {
  const int n = 3, N = 8;
  const double eta = 1.0 / N;
  const GroverHamiltonian H = grover_hamiltonian(n, {0});
  const CouplingSpec A = coupling(Regime::projector, n, eta);
  const RMat Abar = pme_rates(H.energies, A.matrix);
  for (int j = 0; j < N; ++j) CHECK(std::abs(Abar.col(j).sum()) < 1e-15);
  CHECK(Abar(0, 5) == doctest::Approx(eta));
  CHECK(Abar(5, 0) == 0.0);
  // Degenerate excited states exchange population at the same rate.
  CHECK(Abar(2, 5) == doctest::Approx(eta));
  // The ground population obeys dp_g/dt = eta (1 - p_g): mixing time N.
  CHECK(rate_matrix_gap(Abar) == doctest::Approx(-eta));
  const Trajectory tr = evolve_pme(Abar, RVec::Constant(N, 1.0 / N), linspace(0.0, 40.0, 5));
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    CHECK(std::abs(tr.column("total_probability")[k] - 1.0) < 1e-10);
    CHECK(tr.column("ground_overlap")[k] ==
          doctest::Approx(1.0 - (N - 1.0) / N * std::exp(-eta * tr.times[k])).epsilon(1e-8));
  }
}

TEST_CASE("PME rejects malformed rate matrices and distributions") {
  RMat bad = RMat::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(evolve_pme(bad, RVec::Constant(2, 0.5), {0.0, 1.0}), InvalidArgument);
  RMat neg = RMat::Zero(2, 2);
  neg(0, 1) = -1.0;
  neg(1, 1) = 1.0;
  CHECK_THROWS_AS(evolve_pme(neg, RVec::Constant(2, 0.5), {0.0, 1.0}), InvalidArgument);
  RMat ok = RMat::Zero(2, 2);
  ok(0, 1) = 1.0;
  ok(1, 1) = -1.0;
  CHECK_THROWS_AS(evolve_pme(ok, RVec::Constant(2, 0.6), {0.0, 1.0}), InvalidArgument);
  RVec negative(2);
  negative << 1.5, -0.5;
  CHECK_THROWS_AS(evolve_pme(ok, negative, {0.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(evolve_pme(ok, RVec::Constant(3, 1.0 / 3), {0.0}), DimensionError);
}

TEST_CASE("perturbed energies are reproducible and bounded") {
  const RVec e = grover_hamiltonian(3, {0}).energies;
  const RVec a = perturbed_energies(e, 1e-6, 4);
  const RVec b = perturbed_energies(e, 1e-6, 4);
  CHECK((a - b).norm() == 0.0);
  CHECK((a - e).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK((a - e).norm() > 0.0);
}

TEST_CASE("crossing and truncation helpers") {
  Trajectory tr;
  tr.times = {0.0, 1.0, 2.0, 3.0};
  tr.add_column("ground_overlap", {0.1, 0.5, 0.9, 0.99});
  CHECK(*first_crossing(tr, "ground_overlap", 0.7) == doctest::Approx(1.5));
  CHECK(*first_crossing(tr, "ground_overlap", 0.05) == 0.0);
  CHECK(!first_crossing(tr, "ground_overlap", 0.999));
  truncate_at(tr, "ground_overlap", 0.85);
  CHECK(tr.times.size() == 3);
  CHECK(tr.column("ground_overlap").back() == 0.9);
  CHECK_THROWS_AS(tr.column("missing"), InvalidArgument);
  CHECK_THROWS_AS(tr.add_column("short", {1.0}), DimensionError);
}

TEST_CASE("regime filters") {
  CHECK(regime_filter(Regime::projector).kind == FilterKind::ideal_step);
  CHECK(regime_filter(Regime::eth).kind == FilterKind::ideal_step);
  CHECK(regime_filter(Regime::bitflip).kind == FilterKind::ideal_step_with_zero);
  CHECK(regime_filter(Regime::laplacian).kind == FilterKind::ideal_step_with_zero);
}

TEST_CASE("projector coherence identity: d zD/dt = -eta^2 (zD + zO)") {
  const int n = 3;
  const GroverHamiltonian H = grover_hamiltonian(n, {0});
  const CouplingSpec A = coupling(Regime::projector, n, 1.0 / 8);
  const double r = coherence_identity_residual(H, A, DensityMatrix::uniform_superposition(8), linspace(1.0, 60.0, 8), 1e-3);
  CHECK(r < 1e-7);
  CHECK_THROWS_AS(coherence_identity_residual(H, coupling(Regime::bitflip, n, 1.0 / 3),
                                              DensityMatrix::uniform_superposition(8), {1.0}, 1e-3),
                  InvalidArgument);
}

TEST_CASE("two-level steady state with a perturbed jump") {
  // Without perturbation the fixed point is exactly |g><g|, with or without H.
  for (bool h : {false, true}) {
    const AppendixEReport r = appendix_e_study(0.0, 0.0, h);
    CHECK(r.steady_dimension == 1);
    CHECK(std::abs(r.diagonal_deviation) < 1e-14);
    CHECK(r.offdiagonal_magnitude < 1e-14);
    CHECK(r.distance_to_ground < 1e-14);
  }
  // phi alone leaves a classical two-state chain: rho_ee / rho_gg = phi^2.
  const AppendixEReport phi_only = appendix_e_study(0.0, 0.01, false);
  CHECK(phi_only.diagonal_deviation == doctest::Approx(1e-4 / (1.0 + 1e-4)).epsilon(1e-10));
  CHECK(phi_only.expansion_diagonal == doctest::Approx(1e-4));
  // Frozen from the dense steady-state solve.
  const AppendixEReport e = appendix_e_study(0.01, 0.0, false);
  CHECK(e.diagonal_deviation == doctest::Approx(9.9980003999022848e-05).epsilon(1e-8));
  CHECK(e.offdiagonal_magnitude == doctest::Approx(0.0099980003999200172).epsilon(1e-8));
  CHECK(e.expansion_offdiagonal == doctest::Approx(0.01 * std::abs(1.0 / cplx(1, -4))).epsilon(1e-12));
  CHECK_THROWS_AS(appendix_e_study(0.5, 0.0, false), InvalidArgument);
}
