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

#include "dissearch/discrete.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "dissearch/fit.hpp"

namespace dissearch {

double ChannelRun::total_time() const { return steps * std::sqrt(tau); }

void ChannelRun::validate() const {
  if (!(tau > 0.0)) throw InvalidArgument("ChannelRun: tau must be positive");
  if (steps < 0) throw InvalidArgument("ChannelRun: negative step count");
  if (mode == TraceMode::single_trace && steps != 1) throw InvalidArgument("ChannelRun: single_trace runs one step");
  if (engine == ChannelEngine::trotterized && r < 1) throw InvalidArgument("ChannelRun: r must be at least 1");
}

double ClosedFormParams::Ntilde() const { return std::sqrt((N - 1.0) / N); }
double ClosedFormParams::zeta() const { return eta * std::sqrt(N - 1.0) * std::sqrt(tau); }

Mat dilated_exponential(const Mat& Lt, double tau) {
  if (Lt.rows() != Lt.cols() || Lt.rows() % 2 != 0) throw DimensionError("dilated_exponential: Lt must be 2N x 2N");
  if ((Lt - Lt.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, Lt.cwiseAbs().maxCoeff()))
    throw InvalidArgument("dilated_exponential: Lt is not Hermitian");
  if (!(tau >= 0.0)) throw InvalidArgument("dilated_exponential: tau must be non-negative");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (Lt + Lt.adjoint()));
  const double st = std::sqrt(tau);
  Vec ph(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < ph.size(); ++k) ph(k) = std::exp(cplx(0.0, -es.eigenvalues()(k) * st));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

DensityMatrix channel_step(const DensityMatrix& sigma, const Mat& Lt, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("channel_step: tau must be positive");
  if (Lt.rows() != 2 * sigma.dim()) throw DimensionError("channel_step: Lt must act on ancilla (x) system");
  return DensityMatrix(channel_from_unitary(dilated_exponential(Lt, tau), sigma.rho), sigma.basis);
}

Trajectory iterate_unitary(const Mat& W, const DensityMatrix& sigma0, int steps, int ground, bool keep_states) {
  const int N = sigma0.dim();
  if (N > dim_of(kMaxChannelQubits)) throw CapExceeded("channel iteration limited to n <= " + std::to_string(kMaxChannelQubits));
  if (W.rows() != 2 * N) throw DimensionError("iterate_unitary: W must act on ancilla (x) system");
  if (steps < 0) throw InvalidArgument("iterate_unitary: negative step count");
  Trajectory tr;
  std::vector<double> g;
  Mat s = sigma0.rho;
  // A single unitarity check up front; the loop uses the Kraus blocks directly.
  if ((W.adjoint() * W - Mat::Identity(2 * N, 2 * N)).cwiseAbs().maxCoeff() > 1e-8)
    throw InvalidArgument("iterate_unitary: W is not unitary");
  const Mat K0 = W.topLeftCorner(N, N);
  const Mat K1 = W.bottomLeftCorner(N, N);
  for (int m = 0; m <= steps; ++m) {
    if (m > 0) s = K0 * s * K0.adjoint() + K1 * s * K1.adjoint();
    tr.times.push_back(m);
    g.push_back(s(ground, ground).real());
    if (keep_states) tr.states.push_back(s);
  }
  tr.add_column("ground_overlap", std::move(g));
  return tr;
}

Trajectory iterate_channel(const ChannelRun& run, const Mat& Lt, const DensityMatrix& sigma0, int ground,
                           bool keep_states, const DiscretizedJump* dj) {
  run.validate();
  Mat W;
  Trajectory tr;
  if (run.engine == ChannelEngine::exact_exponential) {
    W = dilated_exponential(Lt, run.tau);
    tr = iterate_unitary(W, sigma0, run.steps, ground, keep_states);
    tr.engine = "exact_exponential";
  } else {
    if (dj == nullptr) throw InvalidArgument("iterate_channel: the trotterized engine needs a discretized jump");
    W = trotter_step(*dj, run.tau, run.p, run.r);
    tr = iterate_unitary(W, sigma0, run.steps, ground, keep_states);
    tr.engine = "trotterized(p=" + std::to_string(run.p) + ",r=" + std::to_string(run.r) + ")";
  }
  // Step index -> physical time m sqrt(tau).
  const double st = std::sqrt(run.tau);
  for (double& t : tr.times) t *= st;
  return tr;
}

namespace {

double geometric_sum(double c, int m) {
  if (std::abs(1.0 - c) < 1e-15) return m;
  return (1.0 - std::pow(c, m)) / (1.0 - c);
}

}  // namespace

Mat multitrace_closed_form(const ClosedFormParams& p, int m, int ground) {
  if (m < 0) throw InvalidArgument("multitrace_closed_form: m must be non-negative");
  if (p.N < 2) throw InvalidArgument("multitrace_closed_form: N must be at least 2");
  if (ground < 0 || ground >= p.N) throw InvalidArgument("multitrace_closed_form: ground out of range");
  const int N = p.N;
  const double Nt = p.Ntilde();
  const double c = std::cos(p.zeta());
  const double cm = std::pow(c, m);
  Vec s = Vec::Constant(N, 1.0 / std::sqrt(static_cast<double>(N)));
  Vec st = Vec::Constant(N, 1.0 / std::sqrt(N - 1.0));
  st(ground) = 0.0;
  Vec g = Vec::Zero(N);
  g(ground) = 1.0;
  Mat sigma = s * s.adjoint();
  sigma += Nt * (c - 1.0) * geometric_sum(c, m) * (st * s.adjoint() + s * st.adjoint());
  sigma += Nt * Nt * (1.0 - 2.0 * cm + cm * cm) * (st * st.adjoint());
  sigma += Nt * Nt * (1.0 - cm * cm) * (g * g.adjoint());
  return sigma;
}

double multitrace_overlap(const ClosedFormParams& p, int m) {
  const double c = std::cos(p.zeta());
  return 1.0 / p.N + (p.N - 1.0) / p.N * (1.0 - std::pow(c, 2 * m));
}

RequiredSteps multitrace_required_steps(double eps_prime, int N, double eta, double tau) {
  if (!(eps_prime > 0.0) || !(eps_prime < 1.0)) throw InvalidArgument("multitrace_required_steps: need 0 < eps' < 1");
  if (N < 2 || !(eta > 0.0) || !(tau > 0.0)) throw InvalidArgument("multitrace_required_steps: invalid parameters");
  const ClosedFormParams p{N, eta, tau};
  const double c = std::cos(p.zeta());
  RequiredSteps r;
  const double sq = std::sqrt(tau);
  r.laurent_time = std::log(1.0 / eps_prime) * (1.0 / (eta * eta * (N - 1.0) * sq) - sq / 6.0);
  r.laurent_steps = r.laurent_time / sq;
  // Overlap >= 1 - eps'  <=>  c^{2m} <= eps' N / (N - 1).
  const double bound = eps_prime * N / (N - 1.0);
  if (bound >= 1.0) {
    r.steps = 0;
  } else if (std::abs(c) >= 1.0 - 1e-15) {
    throw InvalidArgument("multitrace_required_steps: cos(zeta) = +-1, the overlap never changes");
  } else if (c == 0.0) {
    r.steps = 1;
  } else {
    const double x = std::log(bound) / (2.0 * std::log(std::abs(c)));
    r.steps = static_cast<long long>(std::ceil(x - 1e-12));
    // Guard the rounding against the closed form itself.
    while (r.steps > 0 && multitrace_overlap(p, static_cast<int>(r.steps - 1)) >= 1.0 - eps_prime) --r.steps;
    while (multitrace_overlap(p, static_cast<int>(r.steps)) < 1.0 - eps_prime) ++r.steps;
  }
  r.time = r.steps * sq;
  return r;
}

double singletrace_overlap(int N, double eta, double T) {
  if (T < 0.0) throw InvalidArgument("singletrace_overlap: T must be non-negative");
  const double s = std::sin(eta * std::sqrt(N - 1.0) * T);
  return 1.0 / N + (N - 1.0) / N * s * s;
}

double singletrace_time(int N, double eta, double eps_prime) {
  if (!(eps_prime > 0.0) || !(eps_prime < 1.0)) throw InvalidArgument("singletrace_time: need 0 < eps' < 1");
  const double target = (1.0 - eps_prime - 1.0 / N) * N / (N - 1.0);
  if (target <= 0.0) return 0.0;
  return std::asin(std::sqrt(std::min(1.0, target))) / (eta * std::sqrt(N - 1.0));
}

SingleTraceCost singletrace_cost(int N, double eps, int p, double norm_A) {
  if (p < 2 || p % 2 != 0) throw InvalidArgument("singletrace_cost: p must be even");
  if (!(eps > 0.0)) throw InvalidArgument("singletrace_cost: eps must be positive");
  if (N < 2) throw InvalidArgument("singletrace_cost: N must be at least 2");
  SingleTraceCost c;
  const double eta = 1.0 / N;
  c.sqrt_tau = 0.5 * std::numbers::pi / (eta * std::sqrt(N - 1.0));
  const double q = 1.0 / (p + 1.0);
  c.r_real = std::pow(c.sqrt_tau * norm_A, 1.0 + q) * std::pow(eps, -q);
  c.r = static_cast<long long>(std::ceil(c.r_real - 1e-12));
  c.T_H = c.sqrt_tau * c.r;
  return c;
}

namespace {

RefinedDiscretization projector_erf_discretization(int n) {
  const GroverHamiltonian H = grover_hamiltonian(n, {0});
  const CouplingSpec A = coupling(Regime::projector, n, 1.0 / H.N());
  DiscretizationInputs in;
  in.norm_A = spectral_norm(A.matrix);
  in.norm_H = H.gap;
  return refine_discretization(H.energies, A.matrix, make_filter(FilterKind::erf_window), in);
}

}  // namespace

TrotterSweep trotter_error_sweep(int n, int p, int r, const std::vector<double>& taus) {
  if (n < 1 || n > kMaxDenseSuperopQubits) throw CapExceeded("trotter_error_sweep: limited to n <= 6");
  TrotterSweep s;
  s.n = n;
  s.p = p;
  s.r = r;
  s.taus = taus;
  s.discretization = projector_erf_discretization(n);
  const DiscretizedJump& dj = s.discretization.jump;
  const Mat rho = DensityMatrix::uniform_superposition(static_cast<int>(dim_of(n))).rho;
  for (double tau : taus) {
    const Mat We = dilation_unitary(dj.Ls, std::sqrt(tau));
    const Mat Wt = trotter_step(dj, tau, p, r);
    s.errors.push_back(trace_norm(channel_from_unitary(We, rho) - channel_from_unitary(Wt, rho)));
  }
  if (taus.size() >= 2) s.slope = loglog_fit(s.taus, s.errors).slope;
  return s;
}

SingleTraceCheck singletrace_trotter_check(int n, int p, double eps) {
  if (n < 1 || n > kMaxDenseSuperopQubits) throw CapExceeded("singletrace_trotter_check: limited to n <= 6");
  const int N = static_cast<int>(dim_of(n));
  const RefinedDiscretization d = projector_erf_discretization(n);
  SingleTraceCheck c;
  c.n = n;
  c.T = 0.5 * std::numbers::pi / spectral_norm(d.jump.Ls);
  c.r = singletrace_cost(N, eps, p).r;
  const Mat rho = DensityMatrix::uniform_superposition(N).rho;
  const Mat We = dilation_unitary(d.jump.Ls, c.T);
  const Mat Wt = trotter_step(d.jump, c.T * c.T, p, static_cast<int>(c.r));
  c.overlap_exact = channel_from_unitary(We, rho)(0, 0).real();
  c.overlap_trotter = channel_from_unitary(Wt, rho)(0, 0).real();
  c.error = std::abs(c.overlap_exact - c.overlap_trotter);
  return c;
}

Trajectory classical_walk(const RMat& P, const RVec& mu0, int steps, int ground) {
  const Eigen::Index N = P.rows();
  if (P.cols() != N || mu0.size() != N) throw DimensionError("classical_walk: dimension mismatch");
  if ((P.array() < 0.0).any()) throw InvalidArgument("classical_walk: negative transition probability");
  for (Eigen::Index i = 0; i < N; ++i)
    if (std::abs(P.row(i).sum() - 1.0) > 1e-12) throw InvalidArgument("classical_walk: P is not row-stochastic");
  if (steps < 0) throw InvalidArgument("classical_walk: negative step count");
  Trajectory tr;
  tr.engine = "classical_walk";
  std::vector<double> g;
  Eigen::RowVectorXd mu = mu0.transpose();
  for (int t = 0; t <= steps; ++t) {
    if (t > 0) mu = mu * P;
    tr.times.push_back(t);
    g.push_back(mu(ground));
  }
  tr.add_column("ground_overlap", std::move(g));
  return tr;
}

RMat absorbing_walk_matrix(int N, int ground) {
  if (N < 2) throw InvalidArgument("absorbing_walk_matrix: N must be at least 2");
  RMat P = RMat::Constant(N, N, 1.0 / (N - 1.0));
  P.diagonal().setZero();
  P.row(ground).setZero();
  P(ground, ground) = 1.0;
  return P;
}

double absorbing_walk_overlap(int N, long long steps) {
  return 1.0 - (N - 1.0) / N * std::pow((N - 2.0) / (N - 1.0), static_cast<double>(steps));
}

}  // namespace dissearch
