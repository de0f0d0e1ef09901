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
#include "dissearch/fit.hpp"
#include "dissearch/jump.hpp"

using namespace dissearch;

namespace {

double binom(int n, int k) { return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0))); }

double max_abs_diff(const RVec& a, const RVec& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("projector reduced system") {
  const ReducedOdeSystem s = reduced_system(ReducedRegime::projector, 3, 1.0 / 8);
  CHECK(s.coeff.rows() == 2);
  CHECK(s.init(0) == doctest::Approx(1.0 / 8));
  CHECK(s.init(1) == doctest::Approx(49.0 / 8));
  const ReducedRate r = reduced_mixing_rate(s);
  CHECK(r.rate == doctest::Approx(-7.0 / 64).epsilon(1e-12));
  CHECK(r.mixing_time() == doctest::Approx(64.0 / 7));
}

TEST_CASE("eth mean-field reduced system") {
  const double eta = 1.0 / std::sqrt(8.0);
  const ReducedOdeSystem s = reduced_system(ReducedRegime::eth_mean, 3, eta);
  CHECK(reduced_mixing_rate(s).rate == doctest::Approx(-eta * eta));
  const auto [zg, ze] = eth_mean_overlap(3, eta, 2.0);
  CHECK(zg + ze == doctest::Approx(1.0));
  CHECK(zg == doctest::Approx(1.0 - 7.0 / 8 * std::exp(-eta * eta * 2.0)));
}

TEST_CASE("short-range LME variables and initial state") {
  const int n = 4;
  const ReducedOdeSystem s = reduced_system(ReducedRegime::shortrange_lme, n, 0.25);
  // (a, b) in [0, n]^2 with equal parity.
  CHECK(s.labels.size() == 13);
  CHECK(s.layers.size() == s.labels.size());
  CHECK(s.layers.front() == std::make_pair(0, 0));
  for (std::size_t k = 0; k < s.layers.size(); ++k) {
    const auto [a, b] = s.layers[k];
    CHECK((a - b) % 2 == 0);
    CHECK(s.init(static_cast<Eigen::Index>(k)) == doctest::Approx(binom(n, a) * binom(n, b) / 16.0));
  }
  // Each z^a_a sums a whole block, coherences included: sum_a C(n,a)^2 / N.
  double diag = 0.0;
  for (std::size_t k = 0; k < s.layers.size(); ++k)
    if (s.layers[k].first == s.layers[k].second) diag += s.init(static_cast<Eigen::Index>(k));
  CHECK(diag == doctest::Approx(binom(2 * n, n) / 16.0));
}

TEST_CASE("reduced short-range LME matches the full bit-flip Lindbladian") {
  for (int n = 2; n <= 5; ++n) {
    const int N = 1 << n;
    const double eta = 1.0 / n;
    const ReducedOdeSystem s = reduced_system(ReducedRegime::shortrange_lme, n, eta);
    const double T = reduced_mixing_rate(s).mixing_time();
    const std::vector<double> times = linspace(0.0, 2.0 * T, 9);
    const GroverHamiltonian H = grover_hamiltonian(n, {0});
    LmeOptions opt;
    opt.keep_states = true;
    opt.tol = {1e-12, 1e-14};
    const Trajectory full = evolve_lme(H, coupling(Regime::bitflip, n, eta), regime_filter(Regime::bitflip),
                                       DensityMatrix::uniform_superposition(N), times, opt);
    const std::vector<RVec> red = evolve_reduced(s, times, {1e-12, 1e-14});
    for (std::size_t k = 0; k < times.size(); ++k) {
      CHECK(max_abs_diff(reduce_state(s, full.states[k]), red[k]) < 1e-8);
      CHECK(symmetric_leakage(full.states[k], n) < 1e-10);
    }
    // The symmetric-sector rate seen by the ground population.
    Mat Pg = Mat::Zero(N, N);
    Pg(0, 0) = 1.0;
    const LindbladGenerator G(H.matrix(),
                              {build_jump(H.energies, coupling(Regime::bitflip, n, eta).matrix,
                                          regime_filter(Regime::bitflip)).L},
                              false);
    CHECK(observable_sector_rate(G, Pg).alpha_star->real() == doctest::Approx(reduced_mixing_rate(s).rate).epsilon(1e-8));
  }
}

TEST_CASE("reduced short-range PME matches the full Pauli master equation") {
  for (int n = 2; n <= 5; ++n) {
    const int N = 1 << n;
    const double eta = 1.0 / n;
    const ReducedOdeSystem s = reduced_system(ReducedRegime::shortrange_pme, n, eta);
    CHECK(s.init.size() == n + 1);
    const GroverHamiltonian H = grover_hamiltonian(n, {0});
    const RMat Abar = pme_rates(H.energies, coupling(Regime::bitflip, n, eta).matrix);
    const std::vector<double> times = linspace(0.0, 2.0 * reduced_mixing_rate(s).mixing_time(), 9);
    const std::vector<RVec> red = evolve_reduced(s, times, {1e-12, 1e-14});
    const std::vector<RVec> full = integrate_linear(Abar, RVec::Constant(N, 1.0 / N), times, {1e-12, 1e-14});
    for (std::size_t k = 0; k < times.size(); ++k) CHECK(max_abs_diff(reduce_populations(s, full[k]), red[k]) < 1e-8);
    CHECK(reduced_mixing_rate(s).rate == doctest::Approx(rate_matrix_gap(Abar)).epsilon(1e-9));
  }
}

TEST_CASE("reduced projector system matches the full LME") {
  for (int n = 2; n <= 5; ++n) {
    const int N = 1 << n;
    const double eta = 1.0 / N;
    const ReducedOdeSystem s = reduced_system(ReducedRegime::projector, n, eta);
    const GroverHamiltonian H = grover_hamiltonian(n, {0});
    const std::vector<double> times = linspace(0.0, 3.0 * reduced_mixing_rate(s).mixing_time(), 7);
    LmeOptions opt;
    opt.keep_states = true;
    opt.tol = {1e-12, 1e-14};
    const Trajectory full = evolve_lme(H, coupling(Regime::projector, n, eta), regime_filter(Regime::projector),
                                       DensityMatrix::uniform_superposition(N), times, opt);
    const std::vector<RVec> red = evolve_reduced_expm(s, times);
    for (std::size_t k = 0; k < times.size(); ++k) CHECK(max_abs_diff(reduce_state(s, full.states[k]), red[k]) < 1e-8);
  }
}

TEST_CASE("adaptive and exponential reduced propagation agree") {
  const ReducedOdeSystem s = reduced_system(ReducedRegime::shortrange_lme, 8, 1.0 / 8);
  const std::vector<double> times = linspace(0.0, 400.0, 5);
  const auto a = evolve_reduced(s, times, {1e-12, 1e-14});
  const auto b = evolve_reduced_expm(s, times);
  for (std::size_t k = 0; k < times.size(); ++k) CHECK(max_abs_diff(a[k], b[k]) < 1e-9);
}

TEST_CASE("printed short-range builder differs from the corrected one") {
  const ReducedOdeSystem c = reduced_system(ReducedRegime::shortrange_lme, 4, 0.25);
  const ReducedOdeSystem p = reduced_system(ReducedRegime::shortrange_lme, 4, 0.25, ShortRangeVariant::as_printed);
  CHECK(c.coeff.rows() == p.coeff.rows());
  CHECK((c.coeff - p.coeff).norm() > 1e-3);
}

TEST_CASE("short-range mixing times are frozen and scale linearly in N") {
  // n = 3: cross-checked against the ground-population sector of the full
  // generator above; the full spectrum has a slower non-symmetric mode.
  CHECK(reduced_mixing_rate(reduced_system(ReducedRegime::shortrange_lme, 3, 1.0 / 3)).mixing_time() ==
        doctest::Approx(14.434552525403403).epsilon(1e-10));
  CHECK(reduced_mixing_rate(reduced_system(ReducedRegime::shortrange_pme, 3, 1.0 / 3)).mixing_time() ==
        doctest::Approx(8.4686269665968794).epsilon(1e-10));
  std::vector<double> N, T;
  for (int n = 20; n <= 30; n += 2) {
    N.push_back(std::ldexp(1.0, n));
    T.push_back(reduced_mixing_rate(reduced_system(ReducedRegime::shortrange_pme, n, 1.0 / n)).mixing_time());
  }
  const double slope = loglog_fit(N, T).slope;
  CHECK(slope > 0.9);
  CHECK(slope < 1.1);
}

TEST_CASE("reduced systems refuse out-of-range sizes") {
  CHECK_THROWS(reduced_system(ReducedRegime::shortrange_lme, 0, 0.5));
  CHECK_THROWS(reduced_system(ReducedRegime::projector, 3, -1.0));
}
