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

#include "dissearch/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "dissearch/common.hpp"

namespace dissearch {

EnergyOracle energy_oracle(EnergyModel model, int n, std::uint64_t marked, double gap) {
  if (n < 1 || n > 62) throw InvalidArgument("energy_oracle: n out of range");
  if (marked >> n) throw InvalidArgument("energy_oracle: marked string has more than n bits");
  if (model == EnergyModel::hamming_ladder)
    return [marked](std::uint64_t x) { return static_cast<double>(popcount(x ^ marked)); };
  return [marked, gap](std::uint64_t x) { return x == marked ? -gap : 0.0; };
}

GreedyRun greedy_search(int n, const EnergyOracle& energy, std::uint64_t start, std::uint64_t marked) {
  if (n < 1 || n > 62) throw InvalidArgument("greedy_search: n out of range");
  if (start >> n) throw InvalidArgument("greedy_search: start has more than n bits");
  GreedyRun run;
  run.start = start;
  std::uint64_t x = start;
  double e = energy(x);
  run.queries = 1;
  for (int q = 0; q < n; ++q) {
    const std::uint64_t y = x ^ (std::uint64_t{1} << q);
    const double ey = energy(y);
    ++run.queries;
    if (ey < e) {
      x = y;
      e = ey;
      run.flips.push_back(q);
    }
  }
  run.final_state = x;
  run.found = x == marked;
  return run;
}

double exhaustive_search_cost(std::uint64_t N, std::uint64_t M) {
  if (M < 1 || M >= N) throw InvalidArgument("exhaustive_search_cost: need 1 <= M < N");
  return (static_cast<double>(N) + 1.0) / (static_cast<double>(M) + 1.0);
}

double exhaustive_search_cost_bruteforce(int N, int M) {
  if (N < 2 || N > 8 || M < 1 || M >= N) throw InvalidArgument("exhaustive_search_cost_bruteforce: need 1 <= M < N <= 8");
  // Items 0..M-1 are marked; count queries until the first marked item.
  std::vector<int> order(N);
  std::iota(order.begin(), order.end(), 0);
  double total = 0.0;
  long long perms = 0;
  do {
    int k = 0;
    while (order[k] >= M) ++k;
    total += k + 1;
    ++perms;
  } while (std::next_permutation(order.begin(), order.end()));
  return total / perms;
}

}  // namespace dissearch
