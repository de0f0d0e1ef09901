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
#include <map>

#include "dissearch/fit.hpp"
#include "dissearch/jump.hpp"
#include "dissearch/linops.hpp"

using namespace dissearch;

namespace {

DiscretizedJump small_projector_jump(int n) {
  const GroverHamiltonian H = grover_hamiltonian(n, {0});
  const CouplingSpec A = coupling(Regime::projector, n, 1.0 / H.N());
  DiscretizationInputs in;
  in.norm_A = 1.0;
  in.norm_H = 1.0;
  return refine_discretization(H.energies, A.matrix, make_filter(FilterKind::erf_window), in).jump;
}

}  // namespace

TEST_CASE("projector jump keeps only transitions into the ground state") {
  const int n = 3, N = 8;
  const double eta = 1.0 / N;
  const GroverHamiltonian H = grover_hamiltonian(n, {0});
  const Mat L = build_jump(H.energies, coupling(Regime::projector, n, eta).matrix, make_filter(FilterKind::ideal_step)).L;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) CHECK(L(a, b) == cplx(a == 0 && b != 0 ? eta : 0.0));
  CHECK(spectral_norm(L) == doctest::Approx(eta * std::sqrt(N - 1.0)));
}

TEST_CASE("bit-flip jump with the zero-inclusive step is A restricted to excited columns") {
  const int n = 3, N = 8;
  const GroverHamiltonian H = grover_hamiltonian(n, {0});
  const CouplingSpec A = coupling(Regime::bitflip, n, 1.0 / n);
  const Mat L = build_jump(H.energies, A.matrix, make_filter(FilterKind::ideal_step_with_zero)).L;
  Mat Pe = Mat::Identity(N, N);
  Pe(0, 0) = 0.0;
  CHECK((L - A.matrix * Pe).norm() < 1e-15);
}

TEST_CASE("dilation is Hermitian with the jump in the lower-left block") {
  std::mt19937_64 rng(4);
  const Mat L = random_density_matrix(3, rng) * cplx(0.3, 1.1);
  const DilatedOperator d = dilate(L);
  CHECK(d.N == 3);
  CHECK((d.Lt - d.Lt.adjoint()).norm() == 0.0);
  CHECK((d.Lt.bottomLeftCorner(3, 3) - L).norm() == 0.0);
  CHECK(spectral_norm(d.Lt) == doctest::Approx(spectral_norm(L)));
  CHECK_THROWS_AS(dilate(Mat::Zero(2, 3)), DimensionError);
}

TEST_CASE("SVD dilation unitary equals the dense exponential") {
  std::mt19937_64 rng(8);
  Mat L(4, 4);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) L(i, j) = cplx(nd(rng), nd(rng));
  for (double st : {0.01, 0.4, 2.5}) {
    const Mat W = dilation_unitary(L, st);
    const Mat E = expm(-kI * st * dilate(L).Lt);
    CHECK((W - E).norm() < 1e-11);
  }
}

TEST_CASE("channel from a dilation unitary is trace preserving and rejects non-unitaries") {
  std::mt19937_64 rng(12);
  const Mat L = random_density_matrix(3, rng) * 2.0;
  const Mat W = dilation_unitary(L, 0.7);
  const Superoperator ch = channel_superoperator([&](const Mat& r) { return channel_from_unitary(W, r); }, 3);
  CHECK(check_channel(ch).cptp);
  CHECK_THROWS_AS(channel_from_unitary(2.0 * W, Mat::Identity(3, 3)), InvalidArgument);
  CHECK_THROWS_AS(channel_from_unitary(W, Mat::Identity(2, 2)), DimensionError);
}

TEST_CASE("Trotter circuits give every term unit total weight") {
  for (int p : {1, 2, 4}) {
    const TrotterCircuit c = trotter_circuit(5, p, 3);
    std::map<int, double> total;
    for (const auto& [k, w] : c.factors) total[k] += w;
    CHECK(total.size() == 5);
    for (const auto& [k, w] : total) CHECK(w == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t i = 1; i < c.factors.size(); ++i) CHECK(c.factors[i].first != c.factors[i - 1].first);
  }
  // Symmetric second order: forward and backward sweeps share the last term.
  CHECK(trotter_circuit(5, 2, 1).factors.size() == 9);
  CHECK_THROWS_AS(trotter_circuit(5, 3, 1), InvalidArgument);
  CHECK_THROWS_AS(trotter_circuit(5, 2, 0), InvalidArgument);
}

TEST_CASE("one Trotter application has local error of order sqrt(tau)^(p+1)") {
  const DiscretizedJump dj = small_projector_jump(2);
  const Mat Lt = dilate(dj.Ls).Lt;
  for (int p : {1, 2, 4}) {
    // Fourth order reaches the rounding floor (about 3e-12 over ~3000
    // factors) below tau = 0.01, so its sweep sits higher.
    const std::vector<double> taus =
        p == 4 ? std::vector<double>{0.1, 0.2, 0.5, 1.0} : std::vector<double>{1e-3, 3e-3, 1e-2, 3e-2};
    std::vector<double> err;
    for (double tau : taus) err.push_back((trotter_step(dj, tau, p, 1) - expm(-kI * std::sqrt(tau) * Lt)).norm());
    const double slope = loglog_fit(taus, err).slope;
    CHECK(slope == doctest::Approx((p + 1) / 2.0).epsilon(0.05));
  }
  CHECK((trotter_step(dj, 0.0, 2, 1) - Mat::Identity(8, 8)).norm() == 0.0);
  const Mat W = trotter_step(dj, 0.05, 2, 4);
  CHECK((W.adjoint() * W - Mat::Identity(8, 8)).norm() < 1e-10);
}

TEST_CASE("refined discretization reaches the requested accuracy") {
  const GroverHamiltonian H = grover_hamiltonian(3, {0});
  const CouplingSpec A = coupling(Regime::projector, 3, 1.0 / 8);
  DiscretizationInputs in;
  in.eps_s = 1e-4;
  const RefinedDiscretization r =
      refine_discretization(H.energies, A.matrix, make_filter(FilterKind::erf_window), in);
  CHECK(r.converged);
  CHECK(r.refined_error <= 1e-4);
  CHECK(r.refined.M_s >= r.raw.M_s);
  CHECK(r.jump.terms.size() == static_cast<std::size_t>(2 * r.jump.M_mu + 1));
  // The Heisenberg picture of a diagonal H is a phase conjugation.
  const Mat A1 = r.jump.heisenberg(1);
  const Mat U = expm(kI * r.jump.mu * H.matrix());
  CHECK((A1 - U * A.matrix * U.adjoint()).norm() < 1e-12);
}

TEST_CASE("discretization parameters follow the closed-form selection") {
  DiscretizationInputs in;
  in.gap = 1.0;
  in.M_omega = 1.5;
  in.norm_A = 1.0;
  in.norm_H = 1.0;
  in.eps_s = 1e-3;
  in.Z = 4.0;
  const Discretization d = select_discretization(in);
  const double X = 1.5 / 1e-3;
  CHECK(d.M_s == doctest::Approx(std::pow(X, 1.0 / 3.0)));
  CHECK(d.mu == doctest::Approx(1.0 / (2.5 + std::log(X))));
  in.Z = 1.0;
  CHECK_THROWS_AS(select_discretization(in), InvalidArgument);
}

TEST_CASE("cost model branches") {
  // Second branch: tau = ||A||^{-2-4/p} T^{-2/p} eps^{2/p}.
  const CostReport d = cost_model(1.0, 2.0, 100.0, 1e-2, 2, CostMode::discrete, 0.1);
  CHECK(d.tau == doctest::Approx(std::pow(2.0, -4.0) * 1e-2 * 1e-2));
  CHECK(!d.first_branch_active);
  CHECK(d.steps == static_cast<long long>(std::ceil(100.0 / d.tau - 1e-12)));
  CHECK(d.N_A == doctest::Approx(d.T_H / 0.1));
  // Lindblad mode takes the smaller of the two step sizes.
  const CostReport l = cost_model(3.0, 1.0, 10.0, 1e-3, 2, CostMode::lindblad);
  CHECK(l.first_branch_active);
  CHECK(l.tau == doctest::Approx(1e-3 / (81.0 * 10.0)));
  CHECK_THROWS_AS(cost_model(1.0, 1.0, 1.0, 1e-2, 3, CostMode::discrete), InvalidArgument);
}
