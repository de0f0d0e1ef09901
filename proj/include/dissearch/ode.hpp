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
#include <vector>

#include "dissearch/common.hpp"

namespace dissearch {

struct OdeTolerance {
  double rel = 1e-10;
  double abs = 1e-12;
};

using OdeState = std::vector<double>;
using OdeRhs = std::function<void(const OdeState& x, OdeState& dxdt, double t)>;

// Dormand-Prince 4(5) with dense output, sampled at the requested times (which
// must be non-decreasing and start at or after t = 0).
std::vector<OdeState> integrate_at(const OdeRhs& rhs, OdeState x0, const std::vector<double>& times,
                                   OdeTolerance tol = {});

// dz/dt = C z for real C.
std::vector<RVec> integrate_linear(const RMat& C, const RVec& z0, const std::vector<double>& times,
                                   OdeTolerance tol = {});

// d rho/dt = f(rho) for a complex matrix-valued right-hand side.
std::vector<Mat> integrate_matrix(const std::function<Mat(const Mat&)>& f, const Mat& rho0,
                                  const std::vector<double>& times, OdeTolerance tol = {});

// Uniform grid helper: count points from a to b inclusive.
std::vector<double> linspace(double a, double b, int count);

}  // namespace dissearch
