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

#include "dissearch/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <Eigen/Eigenvalues>

namespace dissearch {

Mat GroverHamiltonian::matrix() const { return energies.cast<cplx>().asDiagonal(); }

GroverHamiltonian grover_hamiltonian(int n, std::vector<int> marked, double gap) {
  if (n < 1 || n > 30) throw InvalidArgument("grover_hamiltonian: n out of range");
  if (gap <= 0.0) throw InvalidArgument("grover_hamiltonian: gap must be positive");
  const int N = static_cast<int>(dim_of(n));
  std::set<int> uniq(marked.begin(), marked.end());
  if (uniq.empty() || static_cast<int>(uniq.size()) >= N)
    throw InvalidArgument("grover_hamiltonian: marked set must be nonempty and proper");
  for (int m : uniq)
    if (m < 0 || m >= N) throw InvalidArgument("grover_hamiltonian: marked index out of range");
  GroverHamiltonian h;
  h.n = n;
  h.gap = gap;
  h.marked.assign(uniq.begin(), uniq.end());
  h.energies = RVec::Zero(N);
  for (int m : h.marked) h.energies(m) = -gap;
  return h;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::eth: return "eth";
    case Regime::projector: return "projector";
    case Regime::bitflip: return "bitflip";
    case Regime::laplacian: return "laplacian";
  }
  return "?";
}

Regime regime_from_string(const std::string& s) {
  if (s == "eth") return Regime::eth;
  if (s == "projector") return Regime::projector;
  if (s == "bitflip" || s == "shortrange") return Regime::bitflip;
  if (s == "laplacian") return Regime::laplacian;
  throw InvalidArgument("unknown regime '" + s + "'");
}

Mat sample_gue(int N, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const double s = std::sqrt(0.5);
  Mat A(N, N);
  for (int i = 0; i < N; ++i) {
    A(i, i) = nd(rng);
    for (int j = i + 1; j < N; ++j) {
      const double re = nd(rng) * s;
      const double im = nd(rng) * s;
      A(i, j) = cplx(re, im);
      A(j, i) = cplx(re, -im);
    }
  }
  return A;
}

CouplingSpec coupling(Regime regime, int n, double eta, std::optional<std::uint64_t> seed, int ground) {
  if (!(eta > 0.0)) throw InvalidArgument("coupling: eta must be positive");
  if (n < 1 || n > kMaxChannelQubits)
    throw CapExceeded("coupling: dense coupling limited to n <= " + std::to_string(kMaxChannelQubits));
  const int N = static_cast<int>(dim_of(n));
  if (ground < 0 || ground >= N) throw InvalidArgument("coupling: ground index out of range");
  CouplingSpec c;
  c.regime = regime;
  c.eta = eta;
  c.n = n;
  c.seed = seed;
  c.ground = ground;
  switch (regime) {
    case Regime::projector:
      c.matrix = Mat::Constant(N, N, cplx(eta));
      break;
    case Regime::bitflip: {
      c.matrix = Mat::Zero(N, N);
      for (int a = 0; a < N; ++a)
        for (int q = 0; q < n; ++q) c.matrix(a ^ (1 << q), a) = eta;
      break;
    }
    case Regime::laplacian: {
      // Walk on the complete graph with an absorbing vertex: no edge leaves g.
      RMat M = RMat::Ones(N, N) - RMat::Identity(N, N);
      M.col(ground).setZero();
      RMat D = RMat::Zero(N, N);
      for (int j = 0; j < N; ++j) D(j, j) = M.col(j).sum();
      const RMat Lap = M - D;
      Eigen::JacobiSVD<RMat> svd(Lap);
      c.matrix = (Lap / svd.singularValues()(0)).cast<cplx>();
      // eta has no effect here: the normalization fixes ||A|| = 1.
      break;
    }
    case Regime::eth: {
      if (!seed) throw InvalidArgument("coupling: the eth regime requires a seed");
      std::mt19937_64 rng(*seed);
      c.matrix = eta * sample_gue(N, rng);
      break;
    }
  }
  return c;
}

double FilterFunction::operator()(double omega) const {
  switch (kind) {
    case FilterKind::ideal_step: return omega < 0.0 ? 1.0 : 0.0;
    case FilterKind::ideal_step_with_zero: return omega <= 0.0 ? 1.0 : 0.0;
    case FilterKind::erf_window:
      return 0.5 * (std::erf(erf.slope * omega + erf.upper) - std::erf(erf.slope * omega + erf.lower));
    case FilterKind::custom_table: {
      if (table.empty() || omega < table.front().first || omega > table.back().first) return 0.0;
      auto it = std::lower_bound(table.begin(), table.end(), omega,
                                 [](const std::pair<double, double>& p, double w) { return p.first < w; });
      if (it == table.begin()) return it->second;
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double u = (omega - lo.first) / (hi.first - lo.first);
      return lo.second + u * (hi.second - lo.second);
    }
  }
  return 0.0;
}

FilterFunction make_filter(FilterKind kind, ErfWindow params) {
  if (kind == FilterKind::custom_table) throw InvalidArgument("make_filter: use make_table_filter for tables");
  FilterFunction f;
  f.kind = kind;
  f.erf = params;
  return f;
}

FilterFunction make_table_filter(std::vector<std::pair<double, double>> table) {
  if (table.size() < 2) throw InvalidArgument("make_table_filter: need at least two points");
  std::sort(table.begin(), table.end());
  for (const auto& [w, v] : table)
    if (v < 0.0 || v > 1.0) throw InvalidArgument("make_table_filter: values must lie in [0, 1]");
  FilterFunction f;
  f.kind = FilterKind::custom_table;
  f.table = std::move(table);
  return f;
}

KernelWindow default_kernel_window(double M_omega) { return KernelWindow{-M_omega - 2.0, 2.0, 1e-3}; }

namespace {

void check_window(const FilterFunction& f, const KernelWindow& w) {
  if (!(w.omega_hi > w.omega_lo) || !(w.d_omega > 0.0)) throw InvalidArgument("kernel: empty quadrature window");
  if (f.kind == FilterKind::erf_window) {
    // The Gaussian edges of the window have width 1/slope; the grid has to
    // sample them and the window has to contain them.
    if (w.d_omega > 0.05 / f.erf.slope) throw InvalidArgument("kernel: omega grid too coarse for the erf window");
    if (f(w.omega_lo) > 1e-6 || f(w.omega_hi) > 1e-6)
      throw InvalidArgument("kernel: quadrature window cuts into the filter support");
  }
}

struct Samples {
  std::vector<double> omega;
  std::vector<double> value;
};

Samples sample_filter(const FilterFunction& f, const KernelWindow& w) {
  Samples s;
  const int count = static_cast<int>(std::ceil((w.omega_hi - w.omega_lo) / w.d_omega));
  const double h = (w.omega_hi - w.omega_lo) / count;
  for (int k = 0; k < count; ++k) {
    const double om = w.omega_lo + (k + 0.5) * h;
    const double v = f(om);
    if (v != 0.0) {
      s.omega.push_back(om);
      s.value.push_back(v * h);
    }
  }
  return s;
}

cplx kernel_from_samples(const Samples& s, double t) {
  cplx acc = 0.0;
  for (std::size_t k = 0; k < s.omega.size(); ++k) acc += s.value[k] * std::exp(cplx(0.0, -s.omega[k] * t));
  return acc / (2.0 * std::numbers::pi);
}

}  // namespace

cplx kernel_value(const FilterFunction& f, double s, const KernelWindow& w) {
  check_window(f, w);
  return kernel_from_samples(sample_filter(f, w), s);
}

KernelGrid kernel(const FilterFunction& f, double M_s, double mu, const KernelWindow& w) {
  if (!(M_s > 0.0) || !(mu > 0.0)) throw InvalidArgument("kernel: M_s and mu must be positive");
  check_window(f, w);
  const Samples smp = sample_filter(f, w);
  KernelGrid g;
  g.M_s = M_s;
  g.mu = mu;
  g.M_mu = static_cast<int>(std::floor(M_s / mu + 1e-9));
  g.values.reserve(2 * g.M_mu + 1);
  for (int l = -g.M_mu; l <= g.M_mu; ++l) g.values.push_back(kernel_from_samples(smp, l * mu));
  return g;
}

EthMomentReport check_eth_moments(int n, double eta, int samples, std::uint64_t seed, double K) {
  if (samples < 30) throw InvalidArgument("check_eth_moments: fewer than 30 samples is statistically meaningless");
  const int N = static_cast<int>(dim_of(n));
  std::mt19937_64 rng(seed);
  RMat m2 = RMat::Zero(N, N), m4 = RMat::Zero(N, N);
  Mat mean = Mat::Zero(N, N);
  double norm_acc = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Mat A = eta * sample_gue(N, rng);
    const RMat a2 = A.cwiseAbs2();
    m2 += a2;
    m4 += a2.cwiseProduct(a2);
    mean += A;
    if (eta > 0.0) {
      Eigen::SelfAdjointEigenSolver<Mat> es(A, Eigen::EigenvaluesOnly);
      norm_acc += es.eigenvalues().cwiseAbs().maxCoeff();
    }
  }
  m2 /= samples;
  m4 /= samples;
  mean /= samples;
  EthMomentReport r;
  r.samples = samples;
  r.eta = eta;
  r.K = K;
  r.row_second_sup = m2.rowwise().sum().maxCoeff();
  r.col_second_sup = m2.colwise().sum().maxCoeff();
  r.fourth_sum = m4.sum();
  r.mean_spectral_norm = norm_acc / samples;
  r.inferred_K = std::max({std::sqrt(r.row_second_sup / N), std::sqrt(r.col_second_sup / N),
                           std::pow(r.fourth_sum / (static_cast<double>(N) * N), 0.25)});
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const double var = m2(i, j) - std::norm(mean(i, j));
      if (var > 0.0) r.max_entry_mean_z = std::max(r.max_entry_mean_z, std::abs(mean(i, j)) / std::sqrt(var / samples));
    }
  r.second_moment_ok = std::max(r.row_second_sup, r.col_second_sup) <= K * K * N;
  r.fourth_moment_ok = r.fourth_sum <= K * K * K * K * N * N;
  return r;
}

}  // namespace dissearch
