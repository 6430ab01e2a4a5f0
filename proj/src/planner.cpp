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

#include "ppsc/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ppsc/errors.hpp"
#include "ppsc/privacy_audit.hpp"
#include "ppsc/random.hpp"

namespace ppsc {

namespace {

int CeilAtLeastOne(double bound) {
  if (!(bound > 1.0)) return 1;
  if (bound >= static_cast<double>(std::numeric_limits<int>::max())) {
    throw Error(ErrorKind::kInvalidArgument, "bound exceeds the integer range");
  }
  return static_cast<int>(std::ceil(bound));
}

// 1 - rho^x without cancellation.
double OneMinusPow(double rho, double x) { return -std::expm1(x * std::log(rho)); }

}  // namespace

void Budget::Validate() const {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::kNonPositiveEpsilon, "epsilon must be > 0");
  if (!(delta > 0.0 && delta < 0.5)) {
    throw Error(ErrorKind::kDeltaOutOfRange, "delta must lie in (0, 1/2)");
  }
  if (!(mu > 0.0)) throw Error(ErrorKind::kInvalidArgument, "mu must be > 0");
  if (!(rho > 0.0 && rho < 1.0)) throw Error(ErrorKind::kInvalidArgument, "rho must lie in (0, 1)");
  if (!(nu > 0.0)) throw Error(ErrorKind::kInvalidArgument, "nu must be > 0");
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::kInvalidArgument, "p must lie in (0, 1)");
}

void Plan::Note(std::string name, double value, std::string source) {
  provenance.push_back({std::move(name), value, std::move(source)});
}

double Plan::Get(const std::string& name) const {
  for (const auto& e : provenance) {
    if (e.name == name) return e.value;
  }
  throw Error(ErrorKind::kInvalidArgument, "plan has no entry " + name);
}

double CoveringStepsBound(const PrivateGraph& gp, double rho, double root) {
  if (!(rho > 0.0 && rho < 1.0) || !(root >= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "need rho in (0, 1) and root >= 1");
  }
  const double n_max = gp.n_max();
  const double ratio = (1.0 + gp.r_dagger()) / n_max;
  if (n_max <= 1.0 || ratio >= 1.0) return 1.0;
  const double slack = OneMinusPow(rho, 1.0 / (gp.q() * root));
  return (std::log(slack) - std::log(n_max)) / std::log1p(-ratio);
}

int CoveringSteps(const PrivateGraph& gp, double rho, double root) {
  return CeilAtLeastOne(CoveringStepsBound(gp, rho, root));
}

double SigmaForConsensus(const Budget& budget, double lambda_ppsc) {
  budget.Validate();
  if (!(lambda_ppsc > 0.0)) {
    throw Error(ErrorKind::kZeroLambdaPpsc, "lambda_ppsc is zero; the noise cannot be calibrated");
  }
  return budget.mu * Kappa(budget.epsilon, budget.delta) / lambda_ppsc;
}

int AveragingStepsForConsensus(const PublicGraph& g, const PrivateGraph& gp, double nu,
                               double data_norm_sq, int steps, double sigma_gamma) {
  if (!(nu > 0.0)) throw Error(ErrorKind::kInvalidArgument, "nu must be > 0");
  const double q = gp.q();
  const double s = steps;
  const double base = g.n() * data_norm_sq + 2.0 * q * q * s * s * sigma_gamma * sigma_gamma;
  if (g.lambda_g() >= 1.0 || base <= nu) return 1;
  return CeilAtLeastOne((std::log(nu) - std::log(base)) / (2.0 * std::log1p(-g.lambda_g())));
}

LambdaPpscEstimate ResolveLambdaPpsc(const PrivateGraph& gp, int steps,
                                     const PlannerOptions& options) {
  if (options.lambda_ppsc) {
    if (!(*options.lambda_ppsc > 0.0)) {
      throw Error(ErrorKind::kZeroLambdaPpsc, "lambda_ppsc override must be > 0");
    }
    return {*options.lambda_ppsc, LambdaMethod::kExact, 0};
  }
  Stream stream(options.seed, 0, "lambda_ppsc");
  return LambdaPpsc(gp, steps, options.lambda_options, stream);
}

namespace {

void NoteLambda(Plan& plan, const LambdaPpscEstimate& est, const PlannerOptions& options) {
  plan.lambda_ppsc = est.value;
  const char* src = options.lambda_ppsc                       ? "override"
                    : est.method == LambdaMethod::kExact      ? "exact enumeration"
                                                              : "monte-carlo estimate";
  plan.Note("lambda_ppsc", est.value, src);
}

}  // namespace

Plan PlanConsensus(const Budget& budget, double data_norm_sq, const PublicGraph& g,
                   const PrivateGraph& gp, const PlannerOptions& options) {
  budget.Validate();
  Plan plan;
  plan.recursions = 1;
  plan.steps = CoveringSteps(gp, budget.rho);
  plan.Note("S", plan.steps, "consensus covering bound, rho^(1/q)");
  NoteLambda(plan, ResolveLambdaPpsc(gp, plan.steps, options), options);
  plan.sigma_gamma = SigmaForConsensus(budget, plan.lambda_ppsc);
  plan.Note("kappa", Kappa(budget.epsilon, budget.delta), "Gaussian noise multiplier (eps, delta)");
  plan.Note("lambda_g", g.lambda_g(), "public graph algebraic connectivity");
  plan.Note("sigma_gamma", plan.sigma_gamma, "mu kappa(eps, delta) / lambda_ppsc");
  plan.averaging = AveragingStepsForConsensus(g, gp, budget.nu, data_norm_sq, plan.steps,
                                              plan.sigma_gamma);
  plan.Note("T", plan.averaging, "consensus mean-square bound <= nu");
  return plan;
}

int RecursionsForNle(const EquationSystem& sys, const Eigen::VectorXd& zeta0, double nu,
                     double epsilon0) {
  if (!(nu > 0.0) || !(epsilon0 > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "need nu > 0 and epsilon0 > 0");
  }
  if (zeta0.size() != sys.m()) {
    throw Error(ErrorKind::kDimensionMismatch, "zeta0 has the wrong dimension");
  }
  const double gap = (zeta0 - sys.y_star()).squaredNorm();
  const double start = 2.0 * sys.n() * gap;
  if (start <= nu) return 1;
  const double lh2 = sys.lambda_h() * sys.lambda_h();
  const double rate = std::log(epsilon0 + lh2) - std::log1p(epsilon0);
  return CeilAtLeastOne((std::log(nu) - std::log(start)) / rate);
}

double NleStateBound(const EquationSystem& sys, const Eigen::VectorXd& zeta0, double nu) {
  const double rn = std::sqrt(static_cast<double>(sys.n()));
  const double lh = sys.lambda_h();
  return 2.0 * rn * sys.y_star().norm() + rn * zeta0.norm() +
         (2.0 - lh) / (1.0 - lh) * std::sqrt(nu);
}

Plan PlanNle(const Budget& budget, const EquationSystem& sys, const Eigen::VectorXd& zeta0,
             const PublicGraph& g, const PrivateGraph& gp, const PlannerOptions& options) {
  budget.Validate();
  if (sys.n() != g.n() || gp.n() != g.n()) {
    throw Error(ErrorKind::kDimensionMismatch, "system, G and G_p must share n");
  }
  Plan plan;
  plan.Note("lambda_h", sys.lambda_h(), "equation system");
  plan.Note("epsilon0", options.epsilon0, "planner option");
  plan.recursions = RecursionsForNle(sys, zeta0, budget.nu, options.epsilon0);
  plan.Note("L", plan.recursions, "equation solver contraction bound");

  double delta_sharp = DeltaSharp(budget.epsilon, budget.delta, plan.recursions);
  for (int retry = 0; !(delta_sharp > 0.0); ++retry) {
    if (retry >= options.delta_sharp_retries) {
      throw Error(ErrorKind::kDeltaSharpNonPositive,
                  "per-recursion delta underflows for L = " + std::to_string(plan.recursions));
    }
    ++plan.recursions;
    delta_sharp = DeltaSharp(budget.epsilon, budget.delta, plan.recursions);
  }
  plan.Note("delta_sharp", delta_sharp, "L-fold composition");

  const double l = plan.recursions;
  plan.steps = CoveringSteps(gp, budget.rho, 2.0 * l);
  plan.Note("S", plan.steps, "covering bound, rho^(1/(2qL))");
  NoteLambda(plan, ResolveLambdaPpsc(gp, plan.steps, options), options);
  if (!(plan.lambda_ppsc > 0.0)) {
    throw Error(ErrorKind::kZeroLambdaPpsc, "lambda_ppsc is zero; the noise cannot be calibrated");
  }

  const double n = sys.n();
  const double q = gp.q();
  const double s = plan.steps;
  const double phi = NleStateBound(sys, zeta0, budget.nu);
  plan.Note("phi", phi, "reachable state bound");
  const double kappa = Kappa(budget.epsilon / l, delta_sharp);
  plan.Note("kappa", kappa, "Gaussian noise multiplier (eps/L, delta_sharp)");
  plan.sigma_gamma =
      budget.mu * kappa * (std::sqrt(budget.nu) + phi + std::sqrt(n)) / plan.lambda_ppsc;
  plan.Note("sigma_gamma", plan.sigma_gamma, "per-recursion budget (eps/L, delta_sharp)");

  const double lh2 = sys.lambda_h() * sys.lambda_h();
  const double noise = s * s * q * q * plan.sigma_gamma * plan.sigma_gamma;
  const double a = 0.5 * std::log(OneMinusPow(budget.rho, 1.0 / (2.0 * l)) * budget.nu /
                                  (phi * phi + 2.0 * noise));
  const double b = std::log((1.0 - lh2) / (5.0 * n * (1.0 + 1.0 / options.epsilon0)));
  const double c = std::log(budget.nu * (1.0 - lh2) /
                            (16.0 * (n * sys.y_star().squaredNorm() + noise)));
  const double worst = std::min({a, b, c});
  plan.Note("lambda_g", g.lambda_g(), "public graph algebraic connectivity");
  plan.averaging = (g.lambda_g() >= 1.0 || worst >= 0.0)
                       ? 1
                       : CeilAtLeastOne(worst / std::log1p(-g.lambda_g()));
  plan.Note("T", plan.averaging, "consensus residual bound inside each recursion");
  return plan;
}

DcoBounds BoundsFor(const ObjectiveFamily& family, const ConvexSet& set, double nu) {
  return {set.MaxNorm(), GDagger(family, set, nu)};
}

Plan PlanDco(const Budget& budget, const DcoBounds& bounds, const PublicGraph& g,
             const PrivateGraph& gp, const StepsizeSchedule& schedule, int recursions,
             const PlannerOptions& options) {
  budget.Validate();
  if (recursions < 1) throw Error(ErrorKind::kInvalidArgument, "L must be >= 1");
  Plan plan;
  plan.recursions = recursions;
  plan.Note("L", recursions, "caller (empirical accuracy frequency)");
  const double delta_sharp = DeltaSharp(budget.epsilon, budget.delta, recursions);
  if (!(delta_sharp > 0.0)) {
    throw Error(ErrorKind::kDeltaSharpNonPositive,
                "per-recursion delta underflows for L = " + std::to_string(recursions));
  }
  plan.Note("delta_sharp", delta_sharp, "L-fold composition");

  const double l = recursions;
  plan.steps = CoveringSteps(gp, budget.rho, l);
  plan.Note("S", plan.steps, "covering bound, rho^(1/(qL))");
  NoteLambda(plan, ResolveLambdaPpsc(gp, plan.steps, options), options);
  if (!(plan.lambda_ppsc > 0.0)) {
    throw Error(ErrorKind::kZeroLambdaPpsc, "lambda_ppsc is zero; the noise cannot be calibrated");
  }

  const double n = g.n();
  const double q = gp.q();
  const double s = plan.steps;
  plan.Note("g_dagger", bounds.g_dagger, "gradient bound");
  plan.Note("phi", bounds.phi, "largest norm in the feasible set");
  const double kappa = Kappa(budget.epsilon / l, delta_sharp);
  plan.Note("kappa", kappa, "Gaussian noise multiplier (eps/L, delta_sharp)");
  plan.sigma_gamma = n * budget.mu * bounds.g_dagger * kappa / plan.lambda_ppsc;
  plan.Note("sigma_gamma", plan.sigma_gamma, "per-recursion budget (eps/L, delta_sharp)");

  const double alpha = schedule.At(recursions);
  plan.Note("alpha_L", alpha, "step size at the last recursion");
  plan.Note("lambda_g", g.lambda_g(), "public graph algebraic connectivity");
  const double top = std::log(OneMinusPow(budget.p, 1.0 / l) * budget.nu * std::pow(alpha, 4));
  const double bottom = std::log(n * bounds.phi * bounds.phi +
                                 2.0 * q * q * s * s * plan.sigma_gamma * plan.sigma_gamma);
  plan.averaging = g.lambda_g() >= 1.0
                       ? 1
                       : CeilAtLeastOne((top - bottom) / (2.0 * std::log1p(-g.lambda_g())));
  plan.Note("T", plan.averaging, "consensus residual bound at step size alpha_L");
  return plan;
}

}  // namespace ppsc
