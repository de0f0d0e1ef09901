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

#include "dissearch/common.hpp"

namespace dissearch {

using LinearMap = std::function<Vec(const Vec&)>;

struct ArnoldiResult {
  Mat hessenberg;  // k x k
  int dimension = 0;
  bool invariant = false;  // the Krylov space closed under the map
  double last_subdiagonal = 0.0;
};

// Arnoldi with one round of reorthogonalization. Stops when the new direction
// is below breakdown_tol * scale, which signals an invariant subspace.
ArnoldiResult arnoldi(const LinearMap& op, const Vec& start, int max_dim, double scale,
                      double breakdown_tol = 1e-10);

// Largest singular value by power iteration on op_adj(op(x)).
double operator_norm_estimate(const LinearMap& op, const LinearMap& op_adj, Eigen::Index dim, int iterations = 60);

}  // namespace dissearch
