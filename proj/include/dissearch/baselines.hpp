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

#include <cstdint>
#include <functional>
#include <vector>

namespace dissearch {

// Energy oracle over n-bit strings; each call counts as one query.
using EnergyOracle = std::function<double(std::uint64_t)>;

enum class EnergyModel { hamming_ladder, flat_grover };

// hamming_ladder: energy = Hamming distance to g. flat_grover: -gap on the
// marked string, 0 elsewhere.
EnergyOracle energy_oracle(EnergyModel model, int n, std::uint64_t marked, double gap = 1.0);

struct GreedyRun {
  std::uint64_t start = 0;
  std::uint64_t final_state = 0;
  std::vector<int> flips;  // accepted bit positions, in order
  bool found = false;
  long long queries = 0;
};

// One left-to-right pass over the bits; a flip is kept iff the energy
// strictly decreases.
GreedyRun greedy_search(int n, const EnergyOracle& energy, std::uint64_t start, std::uint64_t marked);

// Expected oracle queries (N + 1) / (M + 1) for a uniformly random order.
double exhaustive_search_cost(std::uint64_t N, std::uint64_t M);

// Brute-force average over all orderings of N items with M marked (N <= 8).
double exhaustive_search_cost_bruteforce(int N, int M);

}  // namespace dissearch
