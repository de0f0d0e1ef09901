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

#include "dissearch/continuous.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "dissearch/jump.hpp"

namespace dissearch {

const std::vector<double>& Trajectory::column(const std::string& name) const {
  for (const auto& [k, v] : series)
    if (k == name) return v;
  throw InvalidArgument("Trajectory: no column '" + name + "'");
}

std::vector<double>& Trajectory::column_mut(const std::string& name) {
  for (auto& [k, v] : series)
    if (k == name) return v;
  throw InvalidArgument("Trajectory: no column '" + name + "'");
}

void Trajectory::add_column(const std::string& name, std::vector<double> values) {
  if (values.size() != times.size()) throw DimensionError("Trajectory: column length differs from the time grid");
  for (auto& [k, v] : series)
    if (k == name) {
      v = std::move(values);
      return;
    }
  series.emplace_back(name, std::move(values));
}

bool Trajectory::has_column(const std::string& name) const {
  return std::any_of(series.begin(), series.end(), [&](const auto& kv) { return kv.first == name; });
}

std::optional<double> first_crossing(const Trajectory& tr, const std::string& column, double target) {
  const auto& y = tr.column(column);
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (y[k] < target) continue;
    if (k == 0) return tr.times[0];
    const double u = (target - y[k - 1]) / (y[k] - y[k - 1]);
    return tr.times[k - 1] + u * (tr.times[k] - tr.times[k - 1]);
  }
  return std::nullopt;
}

void truncate_at(Trajectory& tr, const std::string& column, double target) {
  const auto& y = tr.column(column);
  std::size_t keep = y.size();
  for (std::size_t k = 0; k < y.size(); ++k)
    if (y[k] >= target) {
      keep = k + 1;
      break;
    }
  tr.times.resize(keep);
  for (auto& [name, v] : tr.series) v.resize(keep);
  if (!tr.states.empty()) tr.states.resize(keep);
}

FilterFunction regime_filter(Regime r) {
  switch (r) {
    case Regime::eth:
    case Regime::projector: return make_filter(FilterKind::ideal_step);
    case Regime::bitflip:
    case Regime::laplacian: return make_filter(FilterKind::ideal_step_with_zero);
  }
  return make_filter(FilterKind::ideal_step);
}

namespace {

void check_grid(const std::vector<double>& times) {
  if (times.empty()) throw InvalidArgument("empty time grid");
  if (times.front() < 0.0 || !std::is_sorted(times.begin(), times.end()))
    throw InvalidArgument("time grid must be non-negative and increasing");
}

void fill_overlap_columns(Trajectory& tr, const std::vector<Mat>& states, int ground, bool keep) {
  std::vector<double> g, tr_col;
  for (const Mat& r : states) {
    g.push_back(r(ground, ground).real());
    tr_col.push_back(r.trace().real());
  }
  tr.add_column("ground_overlap", std::move(g));
  tr.add_column("trace", std::move(tr_col));
  if (keep) tr.states = states;
}

}  // namespace

Trajectory evolve_lme(const Mat& H, const std::vector<Mat>& jumps, const DensityMatrix& rho0,
                      const std::vector<double>& times, const LmeOptions& opt) {
  check_grid(times);
  const int N = rho0.dim();
  if (N > dim_of(kMaxMatrixFreeQubits))
    throw CapExceeded("evolve_lme: full-space evolution limited to n <= " + std::to_string(kMaxMatrixFreeQubits) +
                      "; use the reduced systems for larger n");
  if (opt.ground < 0 || opt.ground >= N) throw InvalidArgument("evolve_lme: ground index out of range");
  const LindbladGenerator G(H, jumps, opt.include_hamiltonian);
  if (G.dim() != N) throw DimensionError("evolve_lme: state and generator dimensions differ");

  LmeEngine engine = opt.engine;
  if (engine == LmeEngine::automatic) engine = N <= 16 ? LmeEngine::exact : LmeEngine::rk45;
  if (engine == LmeEngine::exact && N > dim_of(kMaxDenseSuperopQubits))
    throw CapExceeded("evolve_lme: dense propagator limited to n <= " + std::to_string(kMaxDenseSuperopQubits));

  Trajectory tr;
  tr.times = times;
  std::vector<Mat> states;
  states.reserve(times.size());
  if (engine == LmeEngine::exact) {
    tr.engine = "exact";
    const Superoperator S = G.dense();
    // Propagators between consecutive grid points, reused when the spacing repeats.
    Vec v = vec(rho0.rho);
    double t_prev = 0.0, dt_cached = -1.0;
    Mat P;
    for (double t : times) {
      const double dt = t - t_prev;
      if (dt > 0.0) {
        if (std::abs(dt - dt_cached) > 1e-14 * std::max(1.0, dt)) {
          P = expm(S.m * dt);
          dt_cached = dt;
        }
        v = P * v;
      }
      states.push_back(unvec(v, N));
      t_prev = t;
    }
  } else {
    tr.engine = "rk45";
    states = integrate_matrix([&](const Mat& r) { return G.apply(r); }, rho0.rho, times, opt.tol);
  }
  fill_overlap_columns(tr, states, opt.ground, opt.keep_states);
  return tr;
}

Trajectory evolve_lme(const GroverHamiltonian& H, const CouplingSpec& A, const FilterFunction& filter,
                      const DensityMatrix& rho0, const std::vector<double>& times, LmeOptions opt) {
  if (A.matrix.rows() != H.N()) throw DimensionError("evolve_lme: coupling and Hamiltonian dimensions differ");
  opt.ground = H.ground();
  const Mat L = build_jump(H.energies, A.matrix, filter).L;
  Trajectory tr = evolve_lme(H.matrix(), {L}, rho0, times, opt);
  tr.regime = to_string(A.regime);
  tr.n = H.n;
  tr.eta = A.eta;
  tr.seed = A.seed;
  return tr;
}

RMat dlme_rates(const RVec& energies, const Mat& A, const FilterFunction& filter) {
  const Eigen::Index N = energies.size();
  if (A.rows() != N || A.cols() != N) throw DimensionError("dlme_rates: dimension mismatch");
  RMat R = RMat::Zero(N, N);
  for (Eigen::Index j = 0; j < N; ++j)
    for (Eigen::Index i = 0; i < N; ++i) {
      if (i == j) continue;
      const double g = filter(energies(i) - energies(j));
      R(i, j) = g * g * std::norm(A(i, j));
    }
  for (Eigen::Index j = 0; j < N; ++j) R(j, j) = -R.col(j).sum();
  return R;
}

namespace {

void check_probability(const RVec& p0, const char* who) {
  if ((p0.array() < -1e-15).any()) throw InvalidArgument(std::string(who) + ": negative probability in p0");
  if (std::abs(p0.sum() - 1.0) > 1e-9) throw InvalidArgument(std::string(who) + ": p0 does not sum to 1");
}

Trajectory classical_trajectory(const RMat& R, const RVec& p0, const std::vector<double>& times, int ground,
                                const char* engine) {
  check_grid(times);
  if (ground < 0 || ground >= p0.size()) throw InvalidArgument("ground index out of range");
  const std::vector<RVec> ps = integrate_linear(R, p0, times);
  Trajectory tr;
  tr.times = times;
  tr.engine = engine;
  std::vector<double> g, tot;
  for (const RVec& p : ps) {
    g.push_back(p(ground));
    tot.push_back(p.sum());
  }
  tr.add_column("ground_overlap", std::move(g));
  tr.add_column("total_probability", std::move(tot));
  return tr;
}

}  // namespace

Trajectory evolve_dlme(const RVec& energies, const Mat& A, const FilterFunction& filter, const RVec& p0,
                       const std::vector<double>& times, int ground) {
  if (p0.size() != energies.size()) throw DimensionError("evolve_dlme: p0 has the wrong length");
  check_probability(p0, "evolve_dlme");
  return classical_trajectory(dlme_rates(energies, A, filter), p0, times, ground, "dlme");
}

RMat pme_rates(const RVec& energies, const Mat& A, const FilterFunction& mask) {
  const Eigen::Index N = energies.size();
  if (A.rows() != N || A.cols() != N) throw DimensionError("pme_rates: dimension mismatch");
  RMat R = RMat::Zero(N, N);
  for (Eigen::Index j = 0; j < N; ++j)
    for (Eigen::Index i = 0; i < N; ++i)
      if (i != j && mask(energies(i) - energies(j)) > 0.0) R(i, j) = std::abs(A(i, j));
  for (Eigen::Index j = 0; j < N; ++j) R(j, j) = -R.col(j).sum();
  return R;
}

Trajectory evolve_pme(const RMat& Abar, const RVec& p0, const std::vector<double>& times, int ground) {
  const Eigen::Index N = Abar.rows();
  if (Abar.cols() != N || p0.size() != N) throw DimensionError("evolve_pme: dimension mismatch");
  const double scale = std::max(1.0, Abar.cwiseAbs().maxCoeff());
  for (Eigen::Index j = 0; j < N; ++j) {
    if (std::abs(Abar.col(j).sum()) > 1e-12 * scale)
      throw InvalidArgument("evolve_pme: rate matrix column " + std::to_string(j) + " does not sum to zero");
    for (Eigen::Index i = 0; i < N; ++i)
      if (i != j && Abar(i, j) < 0.0) throw InvalidArgument("evolve_pme: negative off-diagonal rate");
  }
  check_probability(p0, "evolve_pme");
  return classical_trajectory(Abar, p0, times, ground, "pme");
}

double rate_matrix_gap(const RMat& R, double zero_tol) {
  Eigen::EigenSolver<RMat> es(R, false);
  if (es.info() != Eigen::Success) throw NumericalError("rate_matrix_gap: eigensolver failed");
  if (zero_tol < 0.0) zero_tol = 1e-12 * std::max(1.0, R.cwiseAbs().maxCoeff()) * R.rows();
  bool found = false;
  double best = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double re = es.eigenvalues()(k).real();
    if (std::abs(re) < zero_tol) continue;
    if (!found || re > best) best = re;
    found = true;
  }
  if (!found) throw NumericalError("rate_matrix_gap: no nonzero eigenvalue");
  return best;
}

RVec perturbed_energies(const RVec& energies, double delta, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RVec e = energies;
  for (Eigen::Index k = 0; k < e.size(); ++k) e(k) += delta * u(rng);
  return e;
}

CoherenceSplit coherence_split_projector(const std::vector<Mat>& states, int ground) {
  CoherenceSplit s;
  for (const Mat& r : states) {
    double d = 0.0, o = 0.0;
    for (Eigen::Index b = 0; b < r.cols(); ++b)
      for (Eigen::Index a = 0; a < r.rows(); ++a) {
        if (a == ground || b == ground) continue;
        if (a == b)
          d += r(a, a).real();
        else
          o += r(a, b).real();
      }
    s.zD.push_back(d);
    s.zO.push_back(o);
  }
  return s;
}

double coherence_identity_residual(const GroverHamiltonian& H, const CouplingSpec& A, const DensityMatrix& rho0,
                                   const std::vector<double>& times, double dt) {
  if (A.regime != Regime::projector) throw InvalidArgument("coherence_identity_residual: projector regime only");
  if (!(dt > 0.0)) throw InvalidArgument("coherence_identity_residual: dt must be positive");
  const double e2 = A.eta * A.eta;
  LmeOptions opt;
  opt.keep_states = true;
  double worst = 0.0;
  for (double t : times) {
    if (t < dt) continue;
    const Trajectory tr = evolve_lme(H, A, regime_filter(Regime::projector), rho0, {t - dt, t, t + dt}, opt);
    const CoherenceSplit s = coherence_split_projector(tr.states, H.ground());
    const double deriv = (s.zD[2] - s.zD[0]) / (2.0 * dt);
    worst = std::max(worst, std::abs(deriv + e2 * (s.zD[1] + s.zO[1])));
  }
  return worst;
}

AppendixEReport appendix_e_study(double epsilon, double phi, bool include_hamiltonian, double gap) {
  if (std::abs(epsilon) > 0.1 || std::abs(phi) > 0.1)
    throw InvalidArgument("appendix_e_study: |epsilon| and |phi| must not exceed 0.1");
  // Basis order (g, e); L_ge = 1 is the decay e -> g.
  Mat L(2, 2);
  L << epsilon, 1.0, phi, epsilon;
  Mat H = Mat::Zero(2, 2);
  H(0, 0) = -gap;
  const LindbladGenerator G(H, {L}, include_hamiltonian);
  const SteadyStateReport ss = steady_states(G.dense());
  if (ss.basis.empty()) throw NumericalError("appendix_e_study: no stationary state found");
  AppendixEReport r;
  r.epsilon = epsilon;
  r.phi = phi;
  r.include_hamiltonian = include_hamiltonian;
  r.gap = gap;
  r.steady_dimension = ss.dimension;
  r.steady_state = ss.basis.front().rho;
  r.diagonal_deviation = 1.0 - r.steady_state(0, 0).real();
  r.offdiagonal_magnitude = std::abs(r.steady_state(1, 0));
  r.expansion_diagonal = epsilon * epsilon / 17.0 + phi * phi;
  r.expansion_offdiagonal = std::abs(epsilon * (1.0 / cplx(1.0, -4.0) + phi / cplx(1.0, 4.0)));
  Mat g = Mat::Zero(2, 2);
  g(0, 0) = 1.0;
  r.distance_to_ground = trace_norm(r.steady_state - g);
  return r;
}

}  // namespace dissearch
