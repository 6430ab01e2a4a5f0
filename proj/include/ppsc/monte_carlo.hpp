// Copyright 2026 The PPSC Gossip Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PPSC_MONTE_CARLO_HPP_
#define PPSC_MONTE_CARLO_HPP_

#include <cstdint>
#include <vector>

namespace ppsc {

enum class Execution { kSerial, kParallel };

/// Evaluates fn(trial) for every trial in [0, trials) and returns the results in
/// trial order. fn must derive all randomness from the trial index (see
/// Stream), so both execution modes return identical vectors. kSerial is the
/// reference loop; kParallel splits trials across OpenMP threads.
template <class T, class Fn>
std::vector<T> MapTrials(std::int64_t trials, Execution exec, Fn&& fn) {
  std::vector<T> out(static_cast<std::size_t>(trials > 0 ? trials : 0));
  if (exec == Execution::kSerial) {
    for (std::int64_t t = 0; t < trials; ++t) out[static_cast<std::size_t>(t)] = fn(t);
    return out;
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < trials; ++t) out[static_cast<std::size_t>(t)] = fn(t);
  return out;
}

/// Number of OpenMP threads available to kParallel (1 without OpenMP).
int ParallelWidth();

}  // namespace ppsc

#endif  // PPSC_MONTE_CARLO_HPP_
