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

#include "dissearch/linops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "dissearch/krylov.hpp"

namespace dissearch {

namespace {

double max_hermiticity_error(const Mat& M) { return (M - M.adjoint()).cwiseAbs().maxCoeff(); }

void require_square(const Mat& M, const char* what) {
  if (M.rows() != M.cols()) throw DimensionError(std::string(what) + ": matrix is not square");
}

}  // namespace

ValidityReport DensityMatrix::validate() const {
  ValidityReport r;
  if (rho.rows() == 0 || rho.rows() != rho.cols()) return r;
  const double scale = std::max(1.0, rho.norm());
  r.hermiticity_error = max_hermiticity_error(rho);
  r.trace_error = std::abs(rho.trace() - cplx(1.0));
  const Mat herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(herm, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = es.eigenvalues().minCoeff();
  r.ok = r.hermiticity_error <= 1e-12 * scale && r.trace_error <= 1e-10 && r.min_eigenvalue >= -1e-10;
  return r;
}

DensityMatrix DensityMatrix::pure(const Vec& psi, BasisTag b) {
  const Vec u = psi / psi.norm();
  return DensityMatrix(u * u.adjoint(), b);
}

DensityMatrix DensityMatrix::basis_state(int N, int k, BasisTag b) {
  if (k < 0 || k >= N) throw InvalidArgument("basis_state: index out of range");
  Mat m = Mat::Zero(N, N);
  m(k, k) = 1.0;
  return DensityMatrix(m, b);
}

DensityMatrix DensityMatrix::uniform_superposition(int N, BasisTag b) {
  return DensityMatrix(Mat::Constant(N, N, cplx(1.0 / N)), b);
}

Vec vec(const Mat& rho) { return Eigen::Map<const Vec>(rho.data(), rho.size()); }

Mat unvec(const Vec& v, int N) {
  if (v.size() != static_cast<Eigen::Index>(N) * N) throw DimensionError("unvec: size mismatch");
  return Eigen::Map<const Mat>(v.data(), N, N);
}

LindbladGenerator::LindbladGenerator(Mat H, std::vector<Mat> jumps, bool include_hamiltonian)
    : N_(static_cast<int>(H.rows())), H_(std::move(H)), jumps_(std::move(jumps)), include_h_(include_hamiltonian) {
  require_square(H_, "LindbladGenerator");
  if (max_hermiticity_error(H_) > 1e-12 * std::max(1.0, H_.norm()))
    throw InvalidArgument("LindbladGenerator: Hamiltonian is not Hermitian");
  LdL_ = Mat::Zero(N_, N_);
  for (const Mat& L : jumps_) {
    if (L.rows() != N_ || L.cols() != N_) throw DimensionError("LindbladGenerator: jump operator dimension mismatch");
    jumps_adj_.push_back(L.adjoint());
    LdL_ += jumps_adj_.back() * L;
  }
}

Mat LindbladGenerator::apply(const Mat& rho) const {
  Mat out = -0.5 * (LdL_ * rho + rho * LdL_);
  for (std::size_t k = 0; k < jumps_.size(); ++k) out.noalias() += jumps_[k] * rho * jumps_adj_[k];
  if (include_h_) out += -kI * (H_ * rho - rho * H_);
  return out;
}

Mat LindbladGenerator::apply_adjoint(const Mat& X) const {
  Mat out = -0.5 * (LdL_ * X + X * LdL_);
  for (std::size_t k = 0; k < jumps_.size(); ++k) out.noalias() += jumps_adj_[k] * X * jumps_[k];
  if (include_h_) out += kI * (H_ * X - X * H_);
  return out;
}

Superoperator LindbladGenerator::dense() const {
  if (N_ > dim_of(kMaxDenseSuperopQubits))
    throw CapExceeded("dense Liouvillian limited to n <= " + std::to_string(kMaxDenseSuperopQubits) +
                      "; use the matrix-free generator or a reduced system");
  const Mat I = Mat::Identity(N_, N_);
  Superoperator S;
  S.N = N_;
  S.kind = SuperKind::liouvillian;
  S.m = -0.5 * (Eigen::kroneckerProduct(I, LdL_).eval() + Eigen::kroneckerProduct(LdL_.transpose(), I).eval());
  for (const Mat& L : jumps_) S.m += Eigen::kroneckerProduct(L.conjugate(), L).eval();
  if (include_h_) S.m += -kI * (Eigen::kroneckerProduct(I, H_).eval() - Eigen::kroneckerProduct(H_.transpose(), I).eval());
  return S;
}

double LindbladGenerator::norm_bound() const {
  double b = 0.0;
  for (const Mat& L : jumps_) b += 2.0 * L.squaredNorm();
  if (include_h_) b += 2.0 * H_.norm();
  return b;
}

Superoperator build_liouvillian(const Mat& H, const std::vector<Mat>& jumps, bool include_hamiltonian) {
  return LindbladGenerator(H, jumps, include_hamiltonian).dense();
}

Mat expm(const Mat& A) {
  require_square(A, "expm");
  Mat E = A.exp();
  if (!E.allFinite()) throw NumericalError("expm: scaling-and-squaring produced non-finite entries");
  return E;
}

DensityMatrix evolve_exact(const Superoperator& L, const DensityMatrix& rho0, double t) {
  if (t < 0.0) throw InvalidArgument("evolve_exact: negative time");
  if (rho0.dim() != L.N) throw DimensionError("evolve_exact: state and generator dimensions differ");
  if (t == 0.0) return rho0;
  const Mat E = expm(L.m * t);
  return DensityMatrix(unvec(E * vec(rho0.rho), L.N), rho0.basis);
}

namespace {

double superop_norm(const Mat& S) {
  LinearMap op = [&](const Vec& x) -> Vec { return S * x; };
  LinearMap adj = [&](const Vec& x) -> Vec { return S.adjoint() * x; };
  return operator_norm_estimate(op, adj, S.cols());
}

}  // namespace

SteadyStateReport steady_states(const Superoperator& L, double zero_tol) {
  SteadyStateReport rep;
  const int N = L.N;
  const double nrm = superop_norm(L.m);
  const double tol = zero_tol > 0.0 ? zero_tol : 1e-9 * std::max(nrm, 1e-300);
  Eigen::BDCSVD<Mat> svd(L.m, Eigen::ComputeFullV);
  const RVec& s = svd.singularValues();
  std::vector<Mat> herm;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) >= tol && nrm > 0.0) continue;
    const Mat X = unvec(svd.matrixV().col(k), N);
    herm.push_back(0.5 * (X + X.adjoint()));
    herm.push_back(cplx(0.0, 0.5) * (X - X.adjoint()));
  }
  // Real Gram-Schmidt in the Hilbert-Schmidt inner product. The kernel is closed
  // under adjoints, so the Hermitian parts span a real form of it.
  std::vector<Mat> basis;
  for (Mat X : herm) {
    for (int pass = 0; pass < 2; ++pass)
      for (const Mat& B : basis) X -= (B.adjoint() * X).trace().real() * B;
    const double nx = X.norm();
    if (nx > 1e-8) basis.push_back(X / nx);
  }
  rep.dimension = static_cast<int>(basis.size());
  rep.degenerate = rep.dimension > 1;
  if (rep.degenerate)
    rep.warning = "degenerate steady space of dimension " + std::to_string(rep.dimension) +
                  ": the fixed point depends on the initial state";
  if (basis.empty()) {
    rep.warning = "empty null space: zero_tol is misconfigured, every Lindbladian has a steady state";
    return rep;
  }
  // Rotate so that only the first element carries trace, then normalize it.
  const int d = rep.dimension;
  RVec tr(d);
  for (int k = 0; k < d; ++k) tr(k) = basis[k].trace().real();
  std::vector<Mat> rotated = basis;
  if (tr.norm() > 1e-10) {
    Eigen::HouseholderQR<RMat> qr(tr);
    const RMat Q = qr.householderQ();
    for (int j = 0; j < d; ++j) {
      Mat acc = Mat::Zero(N, N);
      for (int k = 0; k < d; ++k) acc += Q(k, j) * basis[k];
      rotated[j] = acc;
    }
    rotated[0] /= rotated[0].trace().real();
  }
  for (Mat& X : rotated) rep.basis.emplace_back(X, BasisTag::energy);
  return rep;
}

double SpectrumReport::mixing_time() const {
  if (!alpha_star) throw NumericalError("mixing time undefined: no decaying eigenvalue");
  return 1.0 / std::abs(alpha_star->real());
}

SpectrumReport spectrum_from_eigenvalues(std::vector<cplx> eigenvalues, double zero_tol) {
  SpectrumReport r;
  r.eigenvalues = std::move(eigenvalues);
  r.zero_tol = zero_tol;
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < static_cast<int>(r.eigenvalues.size()); ++k) {
    const cplx l = r.eigenvalues[k];
    if (std::abs(l.real()) < zero_tol && std::abs(l.imag()) < zero_tol) {
      r.zero_modes.push_back(k);
      continue;
    }
    if (l.real() < -zero_tol && l.real() > best) {
      best = l.real();
      r.alpha_star = l;
    }
  }
  if (!r.alpha_star) r.diagnostic = "no eigenvalue with Re < -zero_tol; alpha* undefined";
  return r;
}

SpectrumReport mixing_rate(const Superoperator& L, double zero_tol) {
  if (L.N > dim_of(kMaxDenseEigenQubits))
    throw CapExceeded("dense eigendecomposition limited to n <= " + std::to_string(kMaxDenseEigenQubits) +
                      "; use mixing_rate_krylov");
  const double tol = zero_tol > 0.0 ? zero_tol : 1e-9 * superop_norm(L.m);
  Eigen::ComplexEigenSolver<Mat> es(L.m, false);
  if (es.info() != Eigen::Success) throw NumericalError("mixing_rate: eigensolver did not converge");
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  SpectrumReport r = spectrum_from_eigenvalues(std::move(ev), tol);
  r.method = "dense";
  return r;
}

SpectrumReport mixing_rate_krylov(const LindbladGenerator& G, std::uint64_t seed, int max_dim, double zero_tol) {
  const int N = G.dim();
  if (N > dim_of(kMaxMatrixFreeQubits))
    throw CapExceeded("matrix-free generator limited to n <= " + std::to_string(kMaxMatrixFreeQubits));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Vec v0(static_cast<Eigen::Index>(N) * N);
  for (Eigen::Index i = 0; i < v0.size(); ++i) v0(i) = cplx(nd(rng), nd(rng));
  LinearMap op = [&](const Vec& x) -> Vec { return vec(G.apply(unvec(x, N))); };
  LinearMap adj = [&](const Vec& x) -> Vec { return vec(G.apply_adjoint(unvec(x, N))); };
  const double nrm = operator_norm_estimate(op, adj, v0.size(), 40);
  const double tol = zero_tol > 0.0 ? zero_tol : 1e-9 * nrm;
  const ArnoldiResult ar = arnoldi(op, v0, std::min<Eigen::Index>(max_dim, v0.size()), nrm);
  Eigen::ComplexEigenSolver<Mat> es(ar.hessenberg, false);
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  SpectrumReport r = spectrum_from_eigenvalues(std::move(ev), tol);
  r.method = "krylov";
  if (!ar.invariant) r.diagnostic += (r.diagnostic.empty() ? "" : "; ") + std::string("Krylov space not invariant");
  return r;
}

SpectrumReport observable_sector_rate(const LindbladGenerator& G, const Mat& X, int max_dim, double zero_tol) {
  const int N = G.dim();
  LinearMap op = [&](const Vec& x) -> Vec { return vec(G.apply_adjoint(unvec(x, N))); };
  LinearMap adj = [&](const Vec& x) -> Vec { return vec(G.apply(unvec(x, N))); };
  const double nrm = operator_norm_estimate(op, adj, static_cast<Eigen::Index>(N) * N, 40);
  const double tol = zero_tol > 0.0 ? zero_tol : 1e-9 * nrm;
  const ArnoldiResult ar = arnoldi(op, vec(X), max_dim, nrm);
  Eigen::ComplexEigenSolver<Mat> es(ar.hessenberg, false);
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  SpectrumReport r = spectrum_from_eigenvalues(std::move(ev), tol);
  r.method = "krylov-sector";
  if (!ar.invariant) r.diagnostic += (r.diagnostic.empty() ? "" : "; ") + std::string("Krylov space not invariant");
  return r;
}

double trace_norm(const Mat& M) {
  require_square(M, "trace_norm");
  if (max_hermiticity_error(M) <= 1e-13 * std::max(1.0, M.norm())) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (M + M.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::BDCSVD<Mat> svd(M);
  return svd.singularValues().sum();
}

TraceDistance trace_distance(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("trace_distance: dimension mismatch");
  TraceDistance d;
  d.one_norm = trace_norm(a - b);
  d.half = 0.5 * d.one_norm;
  return d;
}

TraceDistance trace_distance(const DensityMatrix& a, const DensityMatrix& b) { return trace_distance(a.rho, b.rho); }

double spectral_norm(const Mat& M) {
  if (M.size() == 0) return 0.0;
  Eigen::BDCSVD<Mat> svd(M);
  return svd.singularValues()(0);
}

double frobenius_norm(const Mat& M) { return M.norm(); }

Superoperator channel_superoperator(const ChannelFn& f, int N) {
  Superoperator S;
  S.N = N;
  S.kind = SuperKind::channel;
  S.m = Mat::Zero(static_cast<Eigen::Index>(N) * N, static_cast<Eigen::Index>(N) * N);
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      Mat E = Mat::Zero(N, N);
      E(i, j) = 1.0;
      S.m.col(i + static_cast<Eigen::Index>(j) * N) = vec(f(E));
    }
  return S;
}

Mat choi_matrix(const Superoperator& channel) {
  const int N = channel.N;
  Mat C = Mat::Zero(static_cast<Eigen::Index>(N) * N, static_cast<Eigen::Index>(N) * N);
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i)
      C.block(static_cast<Eigen::Index>(i) * N, static_cast<Eigen::Index>(j) * N, N, N) =
          unvec(channel.m.col(i + static_cast<Eigen::Index>(j) * N), N);
  return C;
}

ChannelCheck check_channel(const Superoperator& channel, double tol) {
  ChannelCheck c;
  const int N = channel.N;
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      const cplx tr = unvec(channel.m.col(i + static_cast<Eigen::Index>(j) * N), N).trace();
      c.trace_preservation_error = std::max(c.trace_preservation_error, std::abs(tr - cplx(i == j ? 1.0 : 0.0)));
    }
  const Mat C = choi_matrix(channel);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (C + C.adjoint()), Eigen::EigenvaluesOnly);
  c.choi_min_eigenvalue = es.eigenvalues().minCoeff();
  c.cptp = c.trace_preservation_error <= tol && c.choi_min_eigenvalue >= -tol;
  return c;
}

Vec random_state_vector(int N, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Vec psi(N);
  for (int i = 0; i < N; ++i) psi(i) = cplx(nd(rng), nd(rng));
  return psi / psi.norm();
}

Mat random_density_matrix(int N, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Mat G(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) G(i, j) = cplx(nd(rng), nd(rng));
  Mat rho = G * G.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

}  // namespace dissearch
