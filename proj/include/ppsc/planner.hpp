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

#ifndef PPSC_PLANNER_HPP_
#define PPSC_PLANNER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ppsc/graph.hpp"
#include "ppsc/linear_eq.hpp"
#include "ppsc/optim.hpp"
#include "ppsc/ppsc.hpp"

namespace ppsc {

// Privacy and accuracy targets of one solver invocation.
struct Budget {
  double mu = 1.0;        // adjacency radius
  double epsilon = 1.0;
  double delta = 1e-6;
  double rho = 0.99;      // required covering probability
  double nu = 1e-2;       // accuracy target
  double p = 0.9;         // required accuracy frequency (optimization only)

  /// Throws kNonPositiveEpsilon, kDeltaOutOfRange (delta not in (0, 1/2)) or
  /// kInvalidArgument for the remaining fields.
  void Validate() const;
};

struct PlanEntry {
  std::string name;
  double value = 0.0;
  std::string source;  // the bound or override that produced the value
};

// Solver parameters with a record of where each came from.
struct Plan {
  int steps = 1;       // S
  int averaging = 1;   // T
  int recursions = 1;  // L
  double sigma_gamma = 0.0;
  double lambda_ppsc = 0.0;
  std::vector<PlanEntry> provenance;

  void Note(std::string name, double value, std::string source);
  /// Value of a provenance entry; throws kInvalidArgument if absent.
  double Get(const std::string& name) const;
};

struct PlannerOptions {
  double epsilon0 = 0.5;                    // slack in the recursion-count bound
  std::optional<double> lambda_ppsc;        // skips the singular-value search
  LambdaPpscOptions lambda_options;
  std::uint64_t seed = 0;                   // Monte-Carlo fallback of lambda_ppsc
  int delta_sharp_retries = 64;             // L increments tried for delta_sharp
};

/// Real-valued S with (1 - n_max (1 - (1+r)/n_max)^S)^q >= rho^(1/root): root
/// is 1 for one PPSC run, 2L or L when L runs must all cover. Returns 1 when
/// (1 + r)/n_max >= 1.
double CoveringStepsBound(const PrivateGraph& gp, double rho, double root = 1.0);

/// max(1, ceil(CoveringStepsBound(gp, rho, root))).
int CoveringSteps(const PrivateGraph& gp, double rho, double root = 1.0);

/// mu kappa(eps, delta) / lambda_ppsc. Throws kZeroLambdaPpsc for
/// lambda_ppsc <= 0.
double SigmaForConsensus(const Budget& budget, double lambda_ppsc);

/// Smallest T with (n ||d||^2 + 2 q^2 S^2 sigma^2)(1 - lambda_g)^(2T) <= nu.
int AveragingStepsForConsensus(const PublicGraph& g, const PrivateGraph& gp, double nu,
                               double data_norm_sq, int steps, double sigma_gamma);

/// lambda_ppsc for S steps: the override when given, else LambdaPpsc.
LambdaPpscEstimate ResolveLambdaPpsc(const PrivateGraph& gp, int steps,
                                     const PlannerOptions& options);

Plan PlanConsensus(const Budget& budget, double data_norm_sq, const PublicGraph& g,
                   const PrivateGraph& gp, const PlannerOptions& options = {});

/// Recursion count bound L* for the equation solver.
int RecursionsForNle(const EquationSystem& sys, const Eigen::VectorXd& zeta0, double nu,
                     double epsilon0);

/// phi*(nu): bound on the states reachable by the equation solver.
double NleStateBound(const EquationSystem& sys, const Eigen::VectorXd& zeta0, double nu);

Plan PlanNle(const Budget& budget, const EquationSystem& sys, const Eigen::VectorXd& zeta0,
             const PublicGraph& g, const PrivateGraph& gp, const PlannerOptions& options = {});

/// Public bounds on an optimization problem.
struct DcoBounds {
  double phi = 0.0;       // max over the set of ||y||
  double g_dagger = 0.0;  // gradient bound
};

DcoBounds BoundsFor(const ObjectiveFamily& family, const ConvexSet& set, double nu);

/// Plan for a fixed recursion count L (chosen empirically by the caller).
/// Throws kDeltaSharpNonPositive when the per-step delta underflows.
Plan PlanDco(const Budget& budget, const DcoBounds& bounds, const PublicGraph& g,
             const PrivateGraph& gp, const StepsizeSchedule& schedule, int recursions,
             const PlannerOptions& options = {});

}  // namespace ppsc

#endif  // PPSC_PLANNER_HPP_
