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

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dissearch {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

// Every failure raised by the library derives from Error so that the CLI can
// map it to an exit code in one place.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

inline std::int64_t dim_of(int n) { return std::int64_t{1} << n; }

inline int popcount(std::uint64_t x) { return __builtin_popcountll(x); }

// Hard size limits for dense representations. A dense N^2 x N^2 complex
// superoperator at n = 7 needs 4 GiB per copy, which does not fit next to the
// eigensolver workspace on a desk machine.
inline constexpr int kMaxDenseSuperopQubits = 6;
inline constexpr int kMaxDenseEigenQubits = 5;
inline constexpr int kMaxMatrixFreeQubits = 7;
inline constexpr int kMaxChannelQubits = 10;

}  // namespace dissearch
