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

#pragma once

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dissearch/common.hpp"

namespace dissearch {

enum class BasisTag { computational, energy };

struct ValidityReport {
  double hermiticity_error = 0.0;  // max |rho_ab - conj(rho_ba)|
  double trace_error = 0.0;        // |Tr rho - 1|
  double min_eigenvalue = 0.0;
  bool ok = false;
};

struct DensityMatrix {
  Mat rho;
  BasisTag basis = BasisTag::energy;

  DensityMatrix() = default;
  explicit DensityMatrix(Mat m, BasisTag b = BasisTag::energy) : rho(std::move(m)), basis(b) {}

  int dim() const { return static_cast<int>(rho.rows()); }
  cplx operator()(int a, int b) const { return rho(a, b); }

  ValidityReport validate() const;

  static DensityMatrix pure(const Vec& psi, BasisTag b = BasisTag::energy);
  static DensityMatrix basis_state(int N, int k, BasisTag b = BasisTag::energy);
  static DensityMatrix uniform_superposition(int N, BasisTag b = BasisTag::energy);
};

enum class SuperKind { liouvillian, channel };

// Column-stacking convention throughout: vec(X rho Y) = (Y^T kron X) vec(rho).
// Eigen stores matrices column-major, so vec() is a plain reinterpretation.
struct Superoperator {
  Mat m;
  SuperKind kind = SuperKind::liouvillian;
  int N = 0;
};

Vec vec(const Mat& rho);
Mat unvec(const Vec& v, int N);

// Matrix-free Lindblad generator. apply() is the Schroedinger-picture action,
// apply_adjoint() the Heisenberg-picture one.
class LindbladGenerator {
 public:
  LindbladGenerator(Mat H, std::vector<Mat> jumps, bool include_hamiltonian);

  int dim() const { return N_; }
  Mat apply(const Mat& rho) const;
  Mat apply_adjoint(const Mat& X) const;
  Superoperator dense() const;
  // Cheap upper bound 2 * sum ||L_k||_F^2 + 2 ||H||_F on the induced 2-norm.
  double norm_bound() const;

  const Mat& hamiltonian() const { return H_; }
  const std::vector<Mat>& jumps() const { return jumps_; }
  bool includes_hamiltonian() const { return include_h_; }

 private:
  int N_;
  Mat H_;
  std::vector<Mat> jumps_;
  std::vector<Mat> jumps_adj_;
  Mat LdL_;
  bool include_h_;
};

Superoperator build_liouvillian(const Mat& H, const std::vector<Mat>& jumps, bool include_hamiltonian);

// Pade scaling-and-squaring; throws NumericalError on non-finite output.
Mat expm(const Mat& A);

DensityMatrix evolve_exact(const Superoperator& L, const DensityMatrix& rho0, double t);

struct SteadyStateReport {
  std::vector<DensityMatrix> basis;
  int dimension = 0;
  bool degenerate = false;  // dimension > 1
  std::string warning;
};

// zero_tol <= 0 selects the default 1e-9 * ||L||.
SteadyStateReport steady_states(const Superoperator& L, double zero_tol = -1.0);

struct SpectrumReport {
  std::vector<cplx> eigenvalues;
  std::vector<int> zero_modes;
  std::optional<cplx> alpha_star;
  double zero_tol = 0.0;
  std::string method;  // "dense" or "krylov"
  std::string diagnostic;

  double mixing_time() const;
};

SpectrumReport spectrum_from_eigenvalues(std::vector<cplx> eigenvalues, double zero_tol);
SpectrumReport mixing_rate(const Superoperator& L, double zero_tol = -1.0);

// Spectrum of the generator restricted to the cyclic subspace of a seeded
// random start vector. With a generic start this subspace contains every
// eigenvalue, so alpha* coincides with the dense result while only needing
// matrix-vector products.
SpectrumReport mixing_rate_krylov(const LindbladGenerator& G, std::uint64_t seed = 1, int max_dim = 600,
                                  double zero_tol = -1.0);

// Relaxation spectrum of an observable: eigenvalues of the Heisenberg
// generator compressed to the Krylov space spanned by X, L^dag X, ...
// For X = |g><g| this is the rate governing the ground-state population.
SpectrumReport observable_sector_rate(const LindbladGenerator& G, const Mat& X, int max_dim = 200,
                                      double zero_tol = -1.0);

struct TraceDistance {
  double one_norm = 0.0;  // ||a - b||_1
  double half = 0.0;      // 0.5 * ||a - b||_1
};

double trace_norm(const Mat& M);
TraceDistance trace_distance(const Mat& a, const Mat& b);
TraceDistance trace_distance(const DensityMatrix& a, const DensityMatrix& b);
double spectral_norm(const Mat& M);
double frobenius_norm(const Mat& M);

// Channels given as functions on N x N matrices.
using ChannelFn = std::function<Mat(const Mat&)>;
Superoperator channel_superoperator(const ChannelFn& f, int N);
Mat choi_matrix(const Superoperator& channel);

struct ChannelCheck {
  double trace_preservation_error = 0.0;
  double choi_min_eigenvalue = 0.0;
  bool cptp = false;
};
ChannelCheck check_channel(const Superoperator& channel, double tol = 1e-9);

// Normalized complex Wishart matrix G G^dag / Tr; full rank with probability one.
Mat random_density_matrix(int N, std::mt19937_64& rng);
Vec random_state_vector(int N, std::mt19937_64& rng);

}  // namespace dissearch
