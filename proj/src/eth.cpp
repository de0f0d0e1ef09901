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

// Randomized (ETH) couplings: closed-form mean, Monte-Carlo sampling and
// ensemble-averaged generators.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/SVD>

#include "dissearch/continuous.hpp"
#include "dissearch/jump.hpp"

namespace dissearch {

std::pair<double, double> eth_mean_overlap(int n, double eta, double t) {
  if (t < 0.0) throw InvalidArgument("eth_mean_overlap: t must be non-negative");
  const double N = std::ldexp(1.0, n);
  const double zg0 = 1.0 / N;
  const double ze0 = (N - 1.0) / N;
  const double decay = std::exp(-eta * eta * t);
  return {ze0 * (1.0 - decay) + zg0, ze0 * decay};
}

namespace {

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  // Per-sample streams depend only on (seed, index), not on evaluation order.
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x5eedu};
  return std::mt19937_64(seq);
}

struct DissipatorStep {
  Mat L, Ld, LdL;

  Mat rhs(const Mat& r) const {
    Mat out = L * r * Ld;
    out.noalias() -= 0.5 * (LdL * r);
    out.noalias() -= 0.5 * (r * LdL);
    return out;
  }

  Mat rk4(const Mat& r, double h) const {
    const Mat k1 = rhs(r);
    const Mat k2 = rhs(r + 0.5 * h * k1);
    const Mat k3 = rhs(r + 0.5 * h * k2);
    const Mat k4 = rhs(r + h * k3);
    return r + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
};

}  // namespace

Trajectory eth_monte_carlo(int n, double eta, const std::vector<double>& times, const EthMonteCarloOptions& opt) {
  if (n < 1 || n > 6) throw CapExceeded("eth_monte_carlo: limited to 1 <= n <= 6");
  if (opt.samples < 1) throw InvalidArgument("eth_monte_carlo: need at least one sample");
  if (!(opt.resample_interval > 0.0)) throw InvalidArgument("eth_monte_carlo: resample_interval must be positive");
  if (times.empty() || times.front() < 0.0 || !std::is_sorted(times.begin(), times.end()))
    throw InvalidArgument("eth_monte_carlo: time grid must be non-negative and increasing");
  const GroverHamiltonian H = grover_hamiltonian(n, {0});
  const FilterFunction filter = regime_filter(Regime::eth);
  const int N = H.N();
  const int g = H.ground();
  const double delta = opt.resample_interval;
  const std::size_t T = times.size();

  std::vector<double> sum(T, 0.0), sum2(T, 0.0);
  for (int s = 0; s < opt.samples; ++s) {
    std::mt19937_64 rng = sample_rng(opt.seed, static_cast<std::uint64_t>(s));
    Mat rho = DensityMatrix::uniform_superposition(N).rho;
    double t = 0.0;
    std::size_t k = 0;
    while (k < T) {
      DissipatorStep step;
      step.L = build_jump(H.energies, eta * sample_gue(N, rng), filter).L;
      step.Ld = step.L.adjoint();
      step.LdL = step.Ld * step.L;
      // Grid points inside [t, t + delta) are reached by a partial step with
      // the same coupling; the path itself continues from t + delta.
      while (k < T && times[k] < t + delta) {
        const double h = times[k] - t;
        const double v = (h > 0.0 ? step.rk4(rho, h) : rho)(g, g).real();
        sum[k] += v;
        sum2[k] += v * v;
        ++k;
      }
      rho = step.rk4(rho, delta);
      t += delta;
    }
  }

  Trajectory tr;
  tr.times = times;
  tr.regime = "eth";
  tr.engine = "monte_carlo";
  tr.n = n;
  tr.eta = eta;
  tr.seed = opt.seed;
  std::vector<double> mean(T), se(T), lo(T), hi(T);
  const double S = opt.samples;
  for (std::size_t k = 0; k < T; ++k) {
    mean[k] = sum[k] / S;
    const double var = opt.samples > 1 ? std::max(0.0, (sum2[k] - S * mean[k] * mean[k]) / (S - 1.0)) : 0.0;
    se[k] = std::sqrt(var / S);
    lo[k] = mean[k] - 3.0 * se[k];
    hi[k] = mean[k] + 3.0 * se[k];
  }
  tr.add_column("mean", std::move(mean));
  tr.add_column("stderr", std::move(se));
  tr.add_column("lower", std::move(lo));
  tr.add_column("upper", std::move(hi));
  return tr;
}

double fitted_decay_rate(const std::vector<double>& times, const std::vector<double>& zg, double zg0) {
  if (times.size() != zg.size()) throw DimensionError("fitted_decay_rate: length mismatch");
  // log((1 - z_g(t)) / (1 - z_g(0))) = -rate * t, least squares through the origin.
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double r = (1.0 - zg[k]) / (1.0 - zg0);
    if (times[k] <= 0.0 || !(r > 0.0)) continue;
    num += times[k] * std::log(r);
    den += times[k] * times[k];
  }
  if (den == 0.0) throw InvalidArgument("fitted_decay_rate: no usable points");
  return -num / den;
}

LindbladGenerator eth_expected_generator(int n, double eta, int ground) {
  const GroverHamiltonian H = grover_hamiltonian(n, {ground});
  const FilterFunction filter = regime_filter(Regime::eth);
  const int N = H.N();
  // Every GUE entry has E|A_aj|^2 = 1, so averaging D[L] leaves one rank-one
  // jump per allowed transition.
  std::vector<Mat> jumps;
  for (int j = 0; j < N; ++j)
    for (int a = 0; a < N; ++a) {
      const double w = filter(H.energies(a) - H.energies(j));
      if (w == 0.0) continue;
      Mat K = Mat::Zero(N, N);
      K(a, j) = eta * w;
      jumps.push_back(std::move(K));
    }
  return LindbladGenerator(Mat::Zero(N, N), std::move(jumps), false);
}

namespace {

// Columns of M are vec(L_s) / sqrt(S) restricted to the entries in `support`.
// D[L] is a Hermitian form in vec(L), so the average only depends on M M^dag.
std::vector<Mat> compress_stacked(const Mat& M, const std::vector<Eigen::Index>& support, Eigen::Index N) {
  std::vector<Mat> out;
  if (M.rows() == 0) return out;
  Eigen::BDCSVD<Mat> svd(M, Eigen::ComputeThinU);
  const RVec& sv = svd.singularValues();
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) <= 1e-14 * sv(0)) break;
    Vec v = Vec::Zero(N * N);
    for (std::size_t r = 0; r < support.size(); ++r) v(support[r]) = sv(k) * svd.matrixU()(static_cast<Eigen::Index>(r), k);
    out.push_back(unvec(v, static_cast<int>(N)));
  }
  return out;
}

}  // namespace

std::vector<Mat> average_dissipators(const std::vector<Mat>& jumps) {
  if (jumps.empty()) throw InvalidArgument("average_dissipators: no jump operators");
  const Eigen::Index N = jumps.front().rows();
  const Eigen::Index S = static_cast<Eigen::Index>(jumps.size());
  for (const Mat& L : jumps)
    if (L.rows() != N || L.cols() != N) throw DimensionError("average_dissipators: mixed dimensions");
  std::vector<Eigen::Index> support;
  for (Eigen::Index k = 0; k < N * N; ++k)
    for (const Mat& L : jumps)
      if (L(k % N, k / N) != cplx(0.0)) {
        support.push_back(k);
        break;
      }
  Mat M(static_cast<Eigen::Index>(support.size()), S);
  const double w = 1.0 / std::sqrt(static_cast<double>(S));
  for (Eigen::Index s = 0; s < S; ++s)
    for (std::size_t r = 0; r < support.size(); ++r)
      M(static_cast<Eigen::Index>(r), s) = w * jumps[s](support[r] % N, support[r] / N);
  return compress_stacked(M, support, N);
}

LindbladGenerator eth_sample_mean_generator(int n, double eta, int samples, std::uint64_t seed, int ground) {
  if (samples < 1) throw InvalidArgument("eth_sample_mean_generator: need at least one sample");
  const GroverHamiltonian H = grover_hamiltonian(n, {ground});
  const FilterFunction filter = regime_filter(Regime::eth);
  const Eigen::Index N = H.N();
  // The filter fixes the support of every sample, so only those entries are
  // stored: N - 1 of them for the ideal step.
  std::vector<Eigen::Index> support;
  for (Eigen::Index b = 0; b < N; ++b)
    for (Eigen::Index a = 0; a < N; ++a)
      if (filter(H.energies(a) - H.energies(b)) != 0.0) support.push_back(a + b * N);
  Mat M(static_cast<Eigen::Index>(support.size()), samples);
  const double w = 1.0 / std::sqrt(static_cast<double>(samples));
  for (int s = 0; s < samples; ++s) {
    std::mt19937_64 rng = sample_rng(seed, static_cast<std::uint64_t>(s));
    const Mat L = build_jump(H.energies, eta * sample_gue(H.N(), rng), filter).L;
    for (std::size_t r = 0; r < support.size(); ++r)
      M(static_cast<Eigen::Index>(r), s) = w * L(support[r] % N, support[r] / N);
  }
  return LindbladGenerator(Mat::Zero(N, N), compress_stacked(M, support, N), false);
}

MeanGeneratorCheck eth_mean_generator_check(int n, double eta, int samples, std::uint64_t seed) {
  if (n > 3) throw CapExceeded("eth_mean_generator_check: dense superoperators limited to n <= 3 here");
  if (samples < 30) throw InvalidArgument("eth_mean_generator_check: need at least 30 samples");
  const GroverHamiltonian H = grover_hamiltonian(n, {0});
  const FilterFunction filter = regime_filter(Regime::eth);
  const int N = H.N();
  const Mat exact = eth_expected_generator(n, eta).dense().m;
  Mat mean = Mat::Zero(N * N, N * N);
  RMat second = RMat::Zero(N * N, N * N);
  for (int s = 0; s < samples; ++s) {
    std::mt19937_64 rng = sample_rng(seed, static_cast<std::uint64_t>(s));
    const Mat L = build_jump(H.energies, eta * sample_gue(N, rng), filter).L;
    const Mat S = LindbladGenerator(Mat::Zero(N, N), {L}, false).dense().m;
    mean += S;
    second += S.cwiseAbs2();
  }
  mean /= samples;
  second /= samples;
  MeanGeneratorCheck c;
  for (Eigen::Index j = 0; j < mean.cols(); ++j)
    for (Eigen::Index i = 0; i < mean.rows(); ++i) {
      const double var = second(i, j) - std::norm(mean(i, j));
      const double dev = std::abs(mean(i, j) - exact(i, j));
      if (var <= 1e-28) {
        // Deterministic entry: must agree exactly.
        if (dev > 1e-12) c.max_dev_z = std::numeric_limits<double>::infinity();
        continue;
      }
      ++c.entries;
      const double z = dev / std::sqrt(var / samples);
      c.max_dev_z = std::max(c.max_dev_z, z);
      if (std::abs(exact(i, j)) < 1e-15) c.max_abs_z = std::max(c.max_abs_z, z);
    }
  c.z_bound = std::sqrt(2.0 * std::log(2.0 * std::max(1, c.entries))) + 1.0;
  c.ok = c.max_dev_z <= c.z_bound;
  return c;
}

}  // namespace dissearch
