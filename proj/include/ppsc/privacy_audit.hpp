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

#ifndef PPSC_PRIVACY_AUDIT_HPP_
#define PPSC_PRIVACY_AUDIT_HPP_

#include <cstdint>
#include <vector>

#include "ppsc/graph.hpp"
#include "ppsc/monte_carlo.hpp"

namespace ppsc {

/// (1 - n_max (1 - (1 + r)/n_max)^S)^q with each factor clamped at 0.
double CoveringLowerBound(const PrivateGraph& gp, int steps);

/// Per trial, the first step at which every node has gossiped, or
/// max_steps + 1 if that never happens within max_steps.
std::vector<int> FirstCoverTimes(const PrivateGraph& gp, int max_steps, std::int64_t trials,
                                 std::uint64_t seed, Execution exec = Execution::kParallel);

struct CoveringEstimate {
  int steps = 0;
  std::int64_t trials = 0;
  double empirical = 0.0;
  double analytic_lb = 0.0;
  double std_err = 0.0;
};

/// Empirical P(all nodes gossip within S steps) with its binomial standard
/// error, next to the analytic lower bound.
CoveringEstimate EstimateCovering(const PrivateGraph& gp, int steps, std::int64_t trials,
                                  std::uint64_t seed, Execution exec = Execution::kParallel);

/// Covering estimates for S = 1 .. max_steps from one set of trials.
std::vector<CoveringEstimate> CoveringCurve(const PrivateGraph& gp, int max_steps,
                                            std::int64_t trials, std::uint64_t seed,
                                            Execution exec = Execution::kParallel);

/// delta achieved by Gaussian noise sigma for sensitivity mu through a PPSC
/// run with smallest singular value lambda:
/// Q(eps sigma lambda / mu - mu / (2 sigma lambda)).
double DpDeltaBound(double epsilon, double sigma, double lambda_ppsc, double mu);

/// Per-step delta for an L-fold composition that stays within (eps, delta):
/// (delta + e^eps)^(1/L) - e^(eps/L), evaluated in a cancellation-free form.
double DeltaSharp(double epsilon, double delta, int recursions);

struct CompositionAudit {
  int recursions = 1;
  double step_epsilon = 0.0;
  double step_delta = 0.0;
  bool positive = false;  // step_delta > 0 in floating point
};

CompositionAudit AuditComposition(double epsilon, double delta, int recursions);

}  // namespace ppsc

#endif  // PPSC_PRIVACY_AUDIT_HPP_
