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

#ifndef PPSC_OPTIM_HPP_
#define PPSC_OPTIM_HPP_

#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ppsc/graph.hpp"
#include "ppsc/linear_eq.hpp"
#include "ppsc/random.hpp"
#include "ppsc/solver_run.hpp"

namespace ppsc {

// Compact convex feasible set: a Euclidean ball or an axis-aligned box.
class ConvexSet {
 public:
  struct Ball {
    Eigen::VectorXd center;
    double radius = 1.0;
  };
  struct Box {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
  };

  static ConvexSet UnitBall(Eigen::Index m);
  static ConvexSet MakeBall(Eigen::VectorXd center, double radius);
  static ConvexSet MakeBox(Eigen::VectorXd lo, Eigen::VectorXd hi);

  Eigen::Index dim() const;
  Eigen::VectorXd Project(const Eigen::VectorXd& y) const;
  bool Contains(const Eigen::VectorXd& y, double tol = 1e-10) const;
  /// max over the set of ||y||.
  double MaxNorm() const;

  const std::variant<Ball, Box>& shape() const { return shape_; }

 private:
  explicit ConvexSet(std::variant<Ball, Box> shape) : shape_(std::move(shape)) {}
  std::variant<Ball, Box> shape_;
};

// Step sizes alpha_l for the projected (sub)gradient step of recursion l.
class StepsizeSchedule {
 public:
  /// scale / (l + 1); scale = 1 is the default schedule.
  static StepsizeSchedule Harmonic(double scale = 1.0);
  /// scale / (l + 1)^exponent.
  static StepsizeSchedule PowerLaw(double scale, double exponent);
  /// Constant value; violates the diminishing-step conditions.
  static StepsizeSchedule Constant(double value);

  double At(int l) const;

  /// alpha_l -> 0, sum alpha_l^2 < inf and sum alpha_l = inf, decided from the
  /// rule's closed form.
  bool SatisfiesConditions() const;

 private:
  StepsizeSchedule(double scale, double exponent) : scale_(scale), exponent_(exponent) {}
  double scale_;
  double exponent_;  // 0 for constant
};

struct QuadraticTerm {
  Eigen::VectorXd center;  // ||y - c||^2
};

struct LinearTerm {
  Eigen::VectorXd c;  // c^T y
};

// Negated logistic log-likelihood of one agent's samples plus the ridge share:
// sum_j [log(1 + exp(a_j^T y)) - b_j a_j^T y] + (lambda / 2n) ||y||^2.
struct LogisticTerm {
  Eigen::MatrixXd features;  // samples x m
  Eigen::VectorXd labels;    // in {0, 1}
};

// Per-agent objectives f_i(y) = g_i(tau_i, y) sharing one public form.
class ObjectiveFamily {
 public:
  using Term = std::variant<QuadraticTerm, LinearTerm, LogisticTerm>;

  /// parameter_radius bounds ||tau|| over the public parameter set; defaults to
  /// the largest ||tau_i|| present.
  static ObjectiveFamily Quadratic(std::vector<Eigen::VectorXd> centers,
                                   std::optional<double> parameter_radius = {});
  static ObjectiveFamily Linear(std::vector<Eigen::VectorXd> coefficients);
  static ObjectiveFamily Logistic(std::vector<LogisticTerm> terms, double lambda);

  int n() const { return static_cast<int>(terms_.size()); }
  Eigen::Index dim() const { return dim_; }
  const std::vector<Term>& terms() const { return terms_; }
  double lambda() const { return lambda_; }
  double parameter_radius() const { return parameter_radius_; }

  double Value(int i, const Eigen::VectorXd& y) const;
  Eigen::VectorXd Gradient(int i, const Eigen::VectorXd& y) const;
  double TotalValue(const Eigen::VectorXd& y) const;
  Eigen::VectorXd TotalGradient(const Eigen::VectorXd& y) const;

  /// Flattened private parameter tau_i.
  Eigen::VectorXd Parameters(int i) const;

 private:
  ObjectiveFamily(std::vector<Term> terms, Eigen::Index dim, double lambda,
                  double parameter_radius);

  std::vector<Term> terms_;
  Eigen::Index dim_ = 0;
  double lambda_ = 0.0;
  double parameter_radius_ = 0.0;
};

/// ||tau_i - tau'_i|| <= mu for all i. Throws kStructureMismatch when the two
/// families differ in form, agent count or parameter shape.
bool MuAdjacentObjectives(const ObjectiveFamily& a, const ObjectiveFamily& b, double mu);

/// Bound on ||d g_i / d y|| over parameters and the ball
/// {||y||^2 <= max_C ||y||^2 + nu}.
double GDagger(const ObjectiveFamily& family, const ConvexSet& set, double nu);

struct DcoPlan {
  int steps = 1;
  int averaging = 1;
  int recursions = 1;
  double sigma_gamma = 0.0;
};

struct DcoOptions {
  /// Known optimum; when set, per-recursion error ||x - 1 (x) y_ref||^2.
  std::optional<Eigen::VectorXd> reference;
  /// Called after each recursion's local step with (l, state n x m).
  std::function<void(int, const Eigen::MatrixXd&)> on_recursion;
};

/// PPSC-gossip distributed projected gradient. Throws kInfeasibleStart when
/// zeta0 is outside the set.
SolverRun RunDco(const ObjectiveFamily& family, const ConvexSet& set,
                 const PublicGraph& g, const PrivateGraph& gp, const DcoPlan& plan,
                 const StepsizeSchedule& schedule, const Eigen::VectorXd& zeta0,
                 Stream& stream, const DcoOptions& options = {});

/// Relaxed-projection variant for (possibly inconsistent) equation systems:
/// x_k <- x_k + alpha (P_k(x_k) - x_k). The fixed point minimizes
/// sum_k dist(y, E_k)^2, the least-squares solution of the row-normalized
/// system. Errors are measured against that point.
SolverRun RunNleLeastSquares(const EquationSystem& sys, const PublicGraph& g,
                             const PrivateGraph& gp, const DcoPlan& plan,
                             const StepsizeSchedule& schedule,
                             const Eigen::VectorXd& zeta0, Stream& stream);

/// Minimizer of sum_k dist(y, E_k)^2.
Eigen::VectorXd NormalizedLeastSquares(const EquationSystem& sys);

/// Centralized projected gradient on sum_i f_i; reference optimum for tests
/// and experiments.
Eigen::VectorXd CentralizedProjectedGradient(const ObjectiveFamily& family,
                                             const ConvexSet& set,
                                             const Eigen::VectorXd& start,
                                             int iterations, double step);

/// Mann-Whitney AUC with ties counted half. Throws kDegenerateLabels when a
/// class is absent or a label is not 0/1.
double Auc(std::span<const double> scores, std::span<const int> labels);

}  // namespace ppsc

#endif  // PPSC_OPTIM_HPP_
