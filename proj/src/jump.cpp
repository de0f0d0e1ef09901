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

#include "dissearch/jump.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "dissearch/linops.hpp"

namespace dissearch {

JumpOperator build_jump(const RVec& energies, const Mat& A, const FilterFunction& filter) {
  const Eigen::Index N = energies.size();
  if (A.rows() != N || A.cols() != N) throw DimensionError("build_jump: coupling and Hamiltonian dimensions differ");
  JumpOperator j;
  j.L = Mat::Zero(N, N);
  for (Eigen::Index b = 0; b < N; ++b)
    for (Eigen::Index a = 0; a < N; ++a) {
      const double w = filter(energies(a) - energies(b));
      if (w != 0.0) j.L(a, b) = w * A(a, b);
    }
  return j;
}

DilatedOperator dilate(const Mat& L) {
  if (L.rows() != L.cols()) throw DimensionError("dilate: jump operator is not square");
  const Eigen::Index N = L.rows();
  DilatedOperator d;
  d.N = static_cast<int>(N);
  d.Lt = Mat::Zero(2 * N, 2 * N);
  d.Lt.topRightCorner(N, N) = L.adjoint();
  d.Lt.bottomLeftCorner(N, N) = L;
  return d;
}

Discretization select_discretization(const DiscretizationInputs& in) {
  if (!(in.eps_s > 0.0)) throw InvalidArgument("select_discretization: eps_s must be positive");
  if (!(in.gap > 0.0) || !(in.M_omega > 0.0) || !(in.norm_A > 0.0) || !(in.norm_H > 0.0) || !(in.C > 0.0))
    throw InvalidArgument("select_discretization: inputs must be positive");
  if (!(in.Z > 1.0)) throw InvalidArgument("select_discretization: Z must exceed 1");
  const double X = in.C * in.M_omega * in.norm_A / (in.gap * in.eps_s);
  Discretization d;
  d.M_s = in.c1 / in.gap * std::pow(X, 1.0 / (in.Z - 1.0));
  d.mu = in.c2 / (in.norm_H + in.M_omega + std::log(X));
  return d;
}

Mat DiscretizedJump::heisenberg(int l) const {
  const double s = l * mu;
  const Eigen::Index N = energies.size();
  Mat As(N, N);
  for (Eigen::Index b = 0; b < N; ++b)
    for (Eigen::Index a = 0; a < N; ++a) As(a, b) = std::exp(cplx(0.0, (energies(a) - energies(b)) * s)) * A(a, b);
  return As;
}

DiscretizedJump discretize_jump(const RVec& energies, const Mat& A, const KernelGrid& grid) {
  const Eigen::Index N = energies.size();
  if (A.rows() != N || A.cols() != N) throw DimensionError("discretize_jump: dimension mismatch");
  if (static_cast<int>(grid.values.size()) != 2 * grid.M_mu + 1)
    throw InvalidArgument("discretize_jump: kernel grid does not cover [-M_s, M_s]");
  DiscretizedJump dj;
  dj.M_s = grid.M_s;
  dj.mu = grid.mu;
  dj.M_mu = grid.M_mu;
  dj.energies = energies;
  dj.A = A;
  dj.Ls = Mat::Zero(N, N);
  for (int l = -grid.M_mu; l <= grid.M_mu; ++l) {
    const cplx w = grid.at(l) * grid.mu;
    dj.terms.push_back({l, w});
    if (w != cplx(0.0)) dj.Ls += w * dj.heisenberg(l);
  }
  return dj;
}

RefinedDiscretization refine_discretization(const RVec& energies, const Mat& A, const FilterFunction& filter,
                                            const DiscretizationInputs& in, double growth, int max_rounds) {
  const Mat L = build_jump(energies, A, filter).L;
  const KernelWindow win = default_kernel_window(in.M_omega);
  RefinedDiscretization r;
  r.raw = select_discretization(in);
  r.refined = r.raw;
  r.jump = discretize_jump(energies, A, kernel(filter, r.raw.M_s, r.raw.mu, win));
  r.raw_error = spectral_norm(L - r.jump.Ls);
  r.refined_error = r.raw_error;
  while (r.refined_error > in.eps_s && r.rounds < max_rounds) {
    ++r.rounds;
    r.refined.M_s *= growth;
    r.jump = discretize_jump(energies, A, kernel(filter, r.refined.M_s, r.refined.mu, win));
    r.refined_error = spectral_norm(L - r.jump.Ls);
  }
  r.converged = r.refined_error <= in.eps_s;
  return r;
}

namespace {

// Second-order symmetric sweep with time fraction c, appended to out.
void append_s2(std::vector<std::pair<int, double>>& out, int K, double c) {
  for (int k = 0; k < K; ++k) out.emplace_back(k, 0.5 * c);
  for (int k = K - 1; k >= 0; --k) out.emplace_back(k, 0.5 * c);
}

void merge_adjacent(std::vector<std::pair<int, double>>& f) {
  std::vector<std::pair<int, double>> m;
  for (const auto& x : f) {
    if (!m.empty() && m.back().first == x.first)
      m.back().second += x.second;
    else
      m.push_back(x);
  }
  f.swap(m);
}

}  // namespace

TrotterCircuit trotter_circuit(int term_count, int p, int r) {
  if (p != 1 && p != 2 && p != 4) throw InvalidArgument("trotter_circuit: supported orders are p = 1, 2, 4");
  if (r < 1) throw InvalidArgument("trotter_circuit: r must be at least 1");
  if (term_count < 1) throw InvalidArgument("trotter_circuit: no terms");
  TrotterCircuit c;
  c.p = p;
  c.r = r;
  if (p == 1) {
    c.stages = 1;
    for (int k = 0; k < term_count; ++k) c.factors.emplace_back(k, 1.0);
  } else if (p == 2) {
    c.stages = 2;
    append_s2(c.factors, term_count, 1.0);
  } else {
    // Suzuki recursion S4(t) = S2(u t)^2 S2((1 - 4u) t) S2(u t)^2.
    const double u = 1.0 / (4.0 - std::cbrt(4.0));
    c.stages = 10;
    for (double w : {u, u, 1.0 - 4.0 * u, u, u}) append_s2(c.factors, term_count, w);
  }
  merge_adjacent(c.factors);
  return c;
}

Mat trotter_step(const DiscretizedJump& dj, double tau, int p, int r) {
  if (!(tau >= 0.0)) throw InvalidArgument("trotter_step: tau must be non-negative");
  const Eigen::Index N = dj.energies.size();
  const TrotterCircuit circ = trotter_circuit(static_cast<int>(dj.terms.size()), p, r);
  if (tau == 0.0) return Mat::Identity(2 * N, 2 * N);
  if ((dj.A - dj.A.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, dj.A.norm()))
    throw InvalidArgument("trotter_step: the factorized exponentials need a Hermitian coupling");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (dj.A + dj.A.adjoint()));
  const Mat& V = es.eigenvectors();
  const RVec& a = es.eigenvalues();
  const double dt = std::sqrt(tau) / r;

  Mat W = Mat::Identity(2 * N, 2 * N);
  Mat Ctmp(N, N), Stmp(N, N);
  for (const auto& [k, b] : circ.factors) {
    const cplx w = dj.terms[k].weight;
    const double m = std::abs(w);
    if (m == 0.0) continue;
    const cplx ph = w / m;
    const double theta = b * dt * m;
    // exp(-i theta P (x) A_l) = I (x) cos(theta A_l) - i P (x) sin(theta A_l),
    // with P = [[0, conj(ph)], [ph, 0]] and A_l the phase-conjugated coupling.
    const RVec cs = (theta * a).array().cos();
    const RVec sn = (theta * a).array().sin();
    Ctmp.noalias() = V * cs.cast<cplx>().asDiagonal() * V.adjoint();
    Stmp.noalias() = V * sn.cast<cplx>().asDiagonal() * V.adjoint();
    const double s = dj.terms[k].l * dj.mu;
    for (Eigen::Index j = 0; j < N; ++j)
      for (Eigen::Index i = 0; i < N; ++i) {
        const cplx phase = std::exp(cplx(0.0, (dj.energies(i) - dj.energies(j)) * s));
        Ctmp(i, j) *= phase;
        Stmp(i, j) *= phase;
      }
    const Mat top = W.topRows(N);
    const Mat bottom = W.bottomRows(N);
    W.topRows(N).noalias() = Ctmp * top - kI * std::conj(ph) * (Stmp * bottom);
    W.bottomRows(N).noalias() = -kI * ph * (Stmp * top) + Ctmp * bottom;
  }
  // W1^r by binary powering.
  Mat result = Mat::Identity(2 * N, 2 * N);
  Mat base = W;
  for (int e = r; e > 0; e >>= 1) {
    if (e & 1) result = base * result;
    if (e > 1) base = base * base;
  }
  return result;
}

Mat dilation_unitary(const Mat& L, double sqrt_tau) {
  const Eigen::Index N = L.rows();
  Eigen::BDCSVD<Mat> svd(L, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat& U = svd.matrixU();
  const Mat& V = svd.matrixV();
  const RVec s = svd.singularValues() * sqrt_tau;
  const Eigen::VectorXcd c = s.array().cos().cast<cplx>();
  const Eigen::VectorXcd sn = s.array().sin().cast<cplx>();
  Mat E(2 * N, 2 * N);
  E.topLeftCorner(N, N) = V * c.asDiagonal() * V.adjoint();
  E.topRightCorner(N, N) = -kI * (V * sn.asDiagonal() * U.adjoint());
  E.bottomLeftCorner(N, N) = -kI * (U * sn.asDiagonal() * V.adjoint());
  E.bottomRightCorner(N, N) = U * c.asDiagonal() * U.adjoint();
  return E;
}

Mat channel_from_unitary(const Mat& W, const Mat& rho) {
  const Eigen::Index N = rho.rows();
  if (W.rows() != 2 * N || W.cols() != 2 * N) throw DimensionError("channel_from_unitary: dimension mismatch");
  const Mat dev = W.adjoint() * W - Mat::Identity(2 * N, 2 * N);
  if (dev.cwiseAbs().maxCoeff() > 1e-8) throw InvalidArgument("channel_from_unitary: W is not unitary");
  const auto K0 = W.topLeftCorner(N, N);
  const auto K1 = W.bottomLeftCorner(N, N);
  return K0 * rho * K0.adjoint() + K1 * rho * K1.adjoint();
}

CostReport cost_model(double norm_L, double norm_A, double T, double eps, int p, CostMode mode, double mu) {
  if (!(norm_L > 0.0) || !(norm_A > 0.0) || !(T > 0.0) || !(eps > 0.0))
    throw InvalidArgument("cost_model: inputs must be positive");
  if (p < 2 || p % 2 != 0) throw InvalidArgument("cost_model: p must be even");
  const double second = std::pow(norm_A, -2.0 - 4.0 / p) * std::pow(T, -2.0 / p) * std::pow(eps, 2.0 / p);
  CostReport c;
  c.tau = second;
  if (mode == CostMode::lindblad) {
    const double first = std::pow(norm_L, -4.0) * eps / T;
    if (first < second) {
      c.tau = first;
      c.first_branch_active = true;
    }
  }
  c.steps = static_cast<long long>(std::ceil(T / c.tau - 1e-12));
  c.T_H = T / c.tau;
  c.N_A = mu > 0.0 ? c.T_H / mu : 0.0;
  return c;
}

}  // namespace dissearch
