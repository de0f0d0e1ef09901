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

#include "dissearch/ode.hpp"

#include <algorithm>

#include <boost/numeric/odeint.hpp>

namespace dissearch {

namespace odeint = boost::numeric::odeint;

std::vector<OdeState> integrate_at(const OdeRhs& rhs, OdeState x0, const std::vector<double>& times,
                                   OdeTolerance tol) {
  std::vector<OdeState> out;
  if (times.empty()) return out;
  if (times.front() < 0.0 || !std::is_sorted(times.begin(), times.end()))
    throw InvalidArgument("integrate_at: times must be non-negative and sorted");
  out.reserve(times.size());
  // odeint wants a strictly increasing sequence starting at the initial time.
  std::vector<double> grid;
  grid.push_back(0.0);
  for (double t : times)
    if (t > grid.back()) grid.push_back(t);
  std::vector<OdeState> at_grid;
  at_grid.reserve(grid.size());
  if (grid.size() == 1) {
    at_grid.push_back(x0);
  } else {
    auto stepper = odeint::make_dense_output(tol.abs, tol.rel, odeint::runge_kutta_dopri5<OdeState>());
    const double dt0 = std::min(1e-3, 0.1 * (grid[1] - grid[0]));
    odeint::integrate_times(stepper, rhs, x0, grid.begin(), grid.end(), dt0,
                            [&](const OdeState& x, double) { at_grid.push_back(x); });
  }
  std::size_t g = 0;
  for (double t : times) {
    while (grid[g] < t) ++g;
    out.push_back(at_grid[g]);
  }
  return out;
}

std::vector<RVec> integrate_linear(const RMat& C, const RVec& z0, const std::vector<double>& times, OdeTolerance tol) {
  const Eigen::Index d = z0.size();
  if (C.rows() != d || C.cols() != d) throw DimensionError("integrate_linear: coefficient matrix mismatch");
  OdeRhs rhs = [&](const OdeState& x, OdeState& dx, double) {
    Eigen::Map<const RVec> xv(x.data(), d);
    Eigen::Map<RVec> dv(dx.data(), d);
    dv.noalias() = C * xv;
  };
  OdeState x0(z0.data(), z0.data() + d);
  std::vector<RVec> out;
  for (const OdeState& x : integrate_at(rhs, x0, times, tol)) out.push_back(Eigen::Map<const RVec>(x.data(), d));
  return out;
}

std::vector<Mat> integrate_matrix(const std::function<Mat(const Mat&)>& f, const Mat& rho0,
                                  const std::vector<double>& times, OdeTolerance tol) {
  const Eigen::Index r = rho0.rows(), c = rho0.cols();
  const Eigen::Index n = r * c;
  // Complex entries are stored as interleaved (re, im) pairs, which matches
  // the memory layout of std::complex<double>.
  OdeRhs rhs = [&](const OdeState& x, OdeState& dx, double) {
    Eigen::Map<const Mat> X(reinterpret_cast<const cplx*>(x.data()), r, c);
    Eigen::Map<Mat> D(reinterpret_cast<cplx*>(dx.data()), r, c);
    D = f(X);
  };
  OdeState x0(2 * n);
  std::copy_n(reinterpret_cast<const double*>(rho0.data()), 2 * n, x0.begin());
  std::vector<Mat> out;
  for (const OdeState& x : integrate_at(rhs, x0, times, tol))
    out.push_back(Eigen::Map<const Mat>(reinterpret_cast<const cplx*>(x.data()), r, c));
  return out;
}

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> v;
  if (count <= 0) return v;
  if (count == 1) return {a};
  v.reserve(count);
  for (int i = 0; i < count; ++i) v.push_back(a + (b - a) * i / (count - 1));
  v.back() = b;
  return v;
}

}  // namespace dissearch
