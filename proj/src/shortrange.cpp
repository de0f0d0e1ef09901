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

// Symmetry-reduced ODE systems and their spectral mixing rates.

#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "dissearch/continuous.hpp"

namespace dissearch {

std::string to_string(ReducedRegime r) {
  switch (r) {
    case ReducedRegime::eth_mean: return "eth_mean";
    case ReducedRegime::projector: return "projector";
    case ReducedRegime::shortrange_lme: return "shortrange_lme";
    case ReducedRegime::shortrange_pme: return "shortrange_pme";
  }
  return "?";
}

ReducedRegime reduced_regime_from_string(const std::string& s) {
  if (s == "eth_mean") return ReducedRegime::eth_mean;
  if (s == "projector") return ReducedRegime::projector;
  if (s == "shortrange_lme") return ReducedRegime::shortrange_lme;
  if (s == "shortrange_pme") return ReducedRegime::shortrange_pme;
  throw InvalidArgument("unknown reduced regime '" + s + "'");
}

namespace {

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

double kd(int a, int b) { return a == b ? 1.0 : 0.0; }

ReducedOdeSystem shortrange_lme_system(int n, double eta, ShortRangeVariant variant) {
  ReducedOdeSystem sys;
  sys.regime = ReducedRegime::shortrange_lme;
  sys.n = n;
  sys.eta = eta;
  std::map<std::pair<int, int>, int> idx;
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b)
      if ((a - b) % 2 == 0) {
        idx[{a, b}] = static_cast<int>(sys.layers.size());
        sys.layers.emplace_back(a, b);
        sys.labels.push_back("z^" + std::to_string(a) + "_" + std::to_string(b));
      }
  const int D = static_cast<int>(sys.layers.size());
  sys.coeff = RMat::Zero(D, D);
  sys.init = RVec::Zero(D);
  const double N = std::ldexp(1.0, n);
  const double e2 = eta * eta;

  for (int r = 0; r < D; ++r) {
    const int al = sys.layers[r].first;   // row layer
    const int alp = sys.layers[r].second; // column layer
    sys.init(r) = binom(n, al) * binom(n, alp) / N;
    // Terms referring to variables outside [0, n]^2 vanish.
    auto add = [&](int a, int b, double c) {
      auto it = idx.find({a, b});
      if (it != idx.end() && c != 0.0) sys.coeff(r, it->second) += c * e2;
    };
    add(al + 1, alp + 1, (alp + 1.0) * (al + 1.0));
    add(al - 1, alp + 1, (alp + 1.0) * (n - al + 1.0) * (1 - kd(al, 1)));
    add(al + 1, alp - 1, (al + 1.0) * (n - alp + 1.0) * (1 - kd(alp, 1)));
    add(al - 1, alp - 1, (n - al + 1.0) * (n - alp + 1.0) * (1 - kd(al, 1)) * (1 - kd(alp, 1)));
    add(al - 2, alp, -0.5 * (n - al + 1.0) * (n - al + 2.0) * (1 - kd(al - 2, 0)));
    add(al, alp, -0.5 * (n - al + 1.0) * al);
    add(al, alp, -0.5 * (al + 1.0) * (n - al) * (1 - kd(al, 0)));
    add(al, alp, -0.5 * ((alp + 1.0) * (n - alp) * (1 - kd(alp, 0)) + (n - alp + 1.0) * alp));
    add(al + 2, alp, -0.5 * (al + 1.0) * (al + 2.0) * (1 - kd(al, 0)));
    if (variant == ShortRangeVariant::corrected) {
      add(al, alp + 2, -0.5 * (alp + 1.0) * (alp + 2.0) * (1 - kd(alp, 0)));
      add(al, alp - 2, -0.5 * (n - alp + 1.0) * (n - alp + 2.0) * (1 - kd(alp - 2, 0)));
    } else {
      // Transcribed literally; disagrees with the full Lindbladian.
      add(al, alp + 2, -0.5 * (alp + 1.0) * (al + 2.0) * (1 - kd(alp, 0)));
      add(al, al - 2, -0.5 * (n - alp + 1.0) * (n - alp + 2.0) * (1 - kd(alp - 2, 0)));
    }
  }
  return sys;
}

ReducedOdeSystem shortrange_pme_system(int n, double eta) {
  ReducedOdeSystem sys;
  sys.regime = ReducedRegime::shortrange_pme;
  sys.n = n;
  sys.eta = eta;
  sys.coeff = RMat::Zero(n + 1, n + 1);
  sys.init = RVec::Zero(n + 1);
  const double N = std::ldexp(1.0, n);
  for (int a = 0; a <= n; ++a) {
    sys.labels.push_back("z_" + std::to_string(a));
    sys.init(a) = binom(n, a) / N;
    if (a == 0) continue;  // the ground layer absorbs
    sys.coeff(a, a) -= n * eta;
    if (a + 1 <= n) sys.coeff(a + 1, a) += (n - a) * eta;
    sys.coeff(a - 1, a) += a * eta;
  }
  return sys;
}

}  // namespace

ReducedOdeSystem reduced_system(ReducedRegime regime, int n, double eta, ShortRangeVariant variant) {
  if (n < 1) throw InvalidArgument("reduced_system: n must be at least 1");
  if (!(eta > 0.0)) throw InvalidArgument("reduced_system: eta must be positive");
  const double N = std::ldexp(1.0, n);
  const double e2 = eta * eta;
  switch (regime) {
    case ReducedRegime::projector: {
      ReducedOdeSystem sys;
      sys.regime = regime;
      sys.n = n;
      sys.eta = eta;
      sys.labels = {"z_g", "z_e"};
      sys.coeff.resize(2, 2);
      sys.coeff << 0.0, e2, 0.0, -(N - 1.0) * e2;
      sys.init.resize(2);
      sys.init << 1.0 / N, (N - 1.0) * (N - 1.0) / N;
      return sys;
    }
    case ReducedRegime::eth_mean: {
      ReducedOdeSystem sys;
      sys.regime = regime;
      sys.n = n;
      sys.eta = eta;
      sys.labels = {"z_g", "z_e^D"};
      sys.coeff.resize(2, 2);
      sys.coeff << 0.0, e2, 0.0, -e2;
      sys.init.resize(2);
      sys.init << 1.0 / N, (N - 1.0) / N;
      return sys;
    }
    case ReducedRegime::shortrange_lme:
      if (n > 60) throw CapExceeded("reduced_system: short-range LME limited to n <= 60");
      return shortrange_lme_system(n, eta, variant);
    case ReducedRegime::shortrange_pme:
      return shortrange_pme_system(n, eta);
  }
  throw InvalidArgument("reduced_system: unknown regime");
}

RVec reduce_state(const ReducedOdeSystem& sys, const Mat& rho, int ground) {
  const int N = static_cast<int>(rho.rows());
  if (N != static_cast<int>(dim_of(sys.n)) || rho.cols() != N) throw DimensionError("reduce_state: dimension mismatch");
  const int D = static_cast<int>(sys.coeff.rows());
  RVec z = RVec::Zero(D);
  switch (sys.regime) {
    case ReducedRegime::projector:
      z(0) = rho(ground, ground).real();
      for (int b = 0; b < N; ++b)
        for (int a = 0; a < N; ++a)
          if (a != ground && b != ground) z(1) += rho(a, b).real();
      break;
    case ReducedRegime::eth_mean:
      z(0) = rho(ground, ground).real();
      for (int a = 0; a < N; ++a)
        if (a != ground) z(1) += rho(a, a).real();
      break;
    case ReducedRegime::shortrange_pme:
      for (int a = 0; a < N; ++a) z(popcount(static_cast<unsigned>(a ^ ground))) += rho(a, a).real();
      break;
    case ReducedRegime::shortrange_lme: {
      std::map<std::pair<int, int>, int> idx;
      for (int k = 0; k < D; ++k) idx[sys.layers[k]] = k;
      for (int b = 0; b < N; ++b)
        for (int a = 0; a < N; ++a) {
          auto it = idx.find({popcount(static_cast<unsigned>(a ^ ground)), popcount(static_cast<unsigned>(b ^ ground))});
          if (it != idx.end()) z(it->second) += rho(a, b).real();
        }
      break;
    }
  }
  return z;
}

RVec reduce_populations(const ReducedOdeSystem& sys, const RVec& p, int ground) {
  if (sys.regime != ReducedRegime::shortrange_pme && sys.regime != ReducedRegime::eth_mean)
    throw InvalidArgument("reduce_populations: " + to_string(sys.regime) + " variables involve coherences");
  return reduce_state(sys, p.cast<cplx>().asDiagonal().toDenseMatrix(), ground);
}

ReducedRate reduced_mixing_rate(const ReducedOdeSystem& sys, double zero_tol) {
  const RMat& C = sys.coeff;
  if (C.rows() == 0) throw InvalidArgument("reduced_mixing_rate: empty system");
  if (zero_tol < 0.0) {
    Eigen::BDCSVD<RMat> svd(C);
    zero_tol = 1e-13 * svd.singularValues()(0);
  }
  Eigen::EigenSolver<RMat> es(C, false);
  if (es.info() != Eigen::Success) throw NumericalError("reduced_mixing_rate: eigensolver failed");
  ReducedRate r;
  r.zero_tol = zero_tol;
  bool found = false;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const cplx ev = es.eigenvalues()(k);
    if (std::abs(ev.real()) < zero_tol) continue;
    if (!found || ev.real() > r.alpha_star.real()) {
      r.alpha_star = ev;
      found = true;
    }
  }
  if (!found) throw NumericalError("reduced_mixing_rate: every eigenvalue is below the zero tolerance");
  r.rate = r.alpha_star.real();
  return r;
}

std::vector<RVec> evolve_reduced(const ReducedOdeSystem& sys, const std::vector<double>& times, OdeTolerance tol) {
  return integrate_linear(sys.coeff, sys.init, times, tol);
}

std::vector<RVec> evolve_reduced_expm(const ReducedOdeSystem& sys, const std::vector<double>& times) {
  if (sys.coeff.rows() >= 200) throw CapExceeded("evolve_reduced_expm: direct exponential limited to dimension < 200");
  std::vector<RVec> out;
  out.reserve(times.size());
  for (double t : times) {
    const RMat E = (sys.coeff * t).exp();
    out.push_back(E * sys.init);
  }
  return out;
}

double symmetric_leakage(const Mat& rho, int n, int ground) {
  const int N = static_cast<int>(dim_of(n));
  if (rho.rows() != N) throw DimensionError("symmetric_leakage: dimension mismatch");
  // Dicke states around g: uniform superpositions of each Hamming layer.
  double inside = 0.0;
  for (int k = 0; k <= n; ++k) {
    Vec d = Vec::Zero(N);
    int count = 0;
    for (int a = 0; a < N; ++a)
      if (popcount(static_cast<unsigned>(a ^ ground)) == k) {
        d(a) = 1.0;
        ++count;
      }
    d /= std::sqrt(static_cast<double>(count));
    inside += (d.adjoint() * rho * d)(0, 0).real();
  }
  return rho.trace().real() - inside;
}

}  // namespace dissearch
