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

#include "dissearch/krylov.hpp"

#include <cmath>
#include <vector>

namespace dissearch {

ArnoldiResult arnoldi(const LinearMap& op, const Vec& start, int max_dim, double scale, double breakdown_tol) {
  const double n0 = start.norm();
  if (n0 == 0.0) throw InvalidArgument("arnoldi: zero start vector");
  std::vector<Vec> Q;
  Q.push_back(start / n0);
  Mat H = Mat::Zero(max_dim + 1, max_dim);
  ArnoldiResult out;
  int k = 0;
  for (; k < max_dim; ++k) {
    Vec w = op(Q[k]);
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j <= k; ++j) {
        const cplx h = Q[j].dot(w);
        H(j, k) += h;
        w -= h * Q[j];
      }
    }
    const double beta = w.norm();
    H(k + 1, k) = beta;
    out.last_subdiagonal = beta;
    if (beta <= breakdown_tol * scale) {
      out.invariant = true;
      ++k;
      break;
    }
    Q.push_back(w / beta);
  }
  out.dimension = k;
  out.hessenberg = H.topLeftCorner(k, k);
  return out;
}

double operator_norm_estimate(const LinearMap& op, const LinearMap& op_adj, Eigen::Index dim, int iterations) {
  // Deterministic, non-symmetric start so that no singular direction is missed
  // by accident.
  Vec x(dim);
  for (Eigen::Index i = 0; i < dim; ++i) x(i) = cplx(1.0 + 0.37 * std::sin(1.3 * i + 0.2), 0.29 * std::cos(0.7 * i));
  x.normalize();
  double sigma = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vec y = op_adj(op(x));
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    sigma = std::sqrt(ny);
    x = y / ny;
  }
  return sigma;
}

}  // namespace dissearch
