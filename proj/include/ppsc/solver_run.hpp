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

#ifndef PPSC_SOLVER_RUN_HPP_
#define PPSC_SOLVER_RUN_HPP_

#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace ppsc {

inline constexpr double kNotMeasured = std::numeric_limits<double>::quiet_NaN();

// Telemetry of one recursion l of an iterative solver (after its local step).
struct RecursionRecord {
  int l = 0;
  double error = kNotMeasured;       // ||x - 1 (x) y_ref||^2
  double delta_norm = kNotMeasured;  // consensus residual ||Delta_l||
  double objective = kNotMeasured;   // f(mean state)
  Eigen::VectorXd mean_state;
  bool covered = false;  // every node touched during this recursion's PPSC
};

struct SolverRun {
  std::vector<RecursionRecord> recursions;
  Eigen::MatrixXd final_state;  // n x m
  double final_error = kNotMeasured;

  bool AllCovered() const {
    for (const auto& r : recursions) {
      if (!r.covered) return false;
    }
    return true;
  }
};

}  // namespace ppsc

#endif  // PPSC_SOLVER_RUN_HPP_
