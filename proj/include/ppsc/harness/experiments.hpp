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

#ifndef PPSC_HARNESS_EXPERIMENTS_HPP_
#define PPSC_HARNESS_EXPERIMENTS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ppsc/graph.hpp"
#include "ppsc/harness/config.hpp"
#include "ppsc/harness/datasets.hpp"
#include "ppsc/harness/result_table.hpp"
#include "ppsc/linear_eq.hpp"
#include "ppsc/monte_carlo.hpp"
#include "ppsc/optim.hpp"
#include "ppsc/planner.hpp"

namespace ppsc::harness {

struct TrialStats {
  double mean = 0.0;
  double std_err = 0.0;
};

TrialStats Summarize(const std::vector<double>& values);

// Monte-Carlo summary of one consensus plan.
struct ConsensusSweep {
  std::vector<TrialStats> mse_by_step;  // s = 0 .. S + T
  TrialStats final_mean;                // mean of the final states
  int empirical_min_averaging = -1;     // smallest T with mean MSE <= nu, -1 if none
};

ConsensusSweep SweepConsensus(const Eigen::VectorXd& d, const PublicGraph& g,
                              const PrivateGraph& gp, const Plan& plan, double nu,
                              std::int64_t trials, std::uint64_t seed, const std::string& label,
                              Execution exec = Execution::kParallel);

struct NleCell {
  TrialStats error;
  double covered_fraction = 0.0;  // trials in which every recursion covered
};

NleCell RunNleTrials(const EquationSystem& sys, const PublicGraph& g, const PrivateGraph& gp,
                     const Plan& plan, const Eigen::VectorXd& zeta0, std::int64_t trials,
                     std::uint64_t seed, const std::string& label,
                     Execution exec = Execution::kParallel);

// An optimization instance with everything needed to judge accuracy.
struct DcoProblem {
  ObjectiveFamily family;
  ConvexSet set;
  Eigen::VectorXd zeta0;
  Eigen::VectorXd reference;  // y_dagger
};

/// Quadratic instance: f_i = ||y - c_i||^2 over set; y_dagger = P_C(mean c).
DcoProblem QuadraticProblem(std::vector<Eigen::VectorXd> centers, ConvexSet set);

/// n random centers with i.i.d. N(0, scale^2) entries.
std::vector<Eigen::VectorXd> RandomCenters(int n, Eigen::Index m, double scale, Stream& stream);

/// Quadratic instance from a config: listed centers, or n random N(0, 1)
/// centers drawn from Stream(seed, 0, "centers").
DcoProblem QuadraticFromConfig(const ExperimentConfig& cfg);

struct DcoTrialSummary {
  double success_frequency = 0.0;  // final error <= nu
  TrialStats final_error;
};

DcoTrialSummary RunDcoTrials(const DcoProblem& problem, const PublicGraph& g,
                             const PrivateGraph& gp, const Plan& plan,
                             const StepsizeSchedule& schedule, double nu, std::int64_t trials,
                             std::uint64_t seed, const std::string& label,
                             Execution exec = Execution::kParallel);

struct DcoSearch {
  Plan plan;
  DcoTrialSummary summary;
  std::vector<std::pair<int, double>> tried;  // (L, success frequency)
  bool reached = false;                       // frequency >= p at plan.recursions
};

/// Doubles L from 1 until the accuracy frequency reaches budget.p or
/// max_doublings is exhausted.
DcoSearch SearchDcoRecursions(const DcoProblem& problem, const Budget& budget,
                              const PublicGraph& g, const PrivateGraph& gp,
                              const StepsizeSchedule& schedule, const PlannerOptions& options,
                              std::int64_t trials, std::uint64_t seed, int max_doublings,
                              Execution exec = Execution::kParallel);

// Train/test split for the classification experiment.
struct ClassificationData {
  LabelledData train;
  LabelledData test;
};

ClassificationData LoadClassificationData(const ExperimentConfig& cfg);

/// Average AUC of the mean state on the test set after each recursion.
std::vector<TrialStats> LogisticAucTrajectory(const ObjectiveFamily& family,
                                              const ConvexSet& set, const LabelledData& test,
                                              const PublicGraph& g, const PrivateGraph& gp,
                                              const Plan& plan,
                                              const StepsizeSchedule& schedule,
                                              std::int64_t trials, std::uint64_t seed,
                                              const std::string& label,
                                              Execution exec = Execution::kParallel);

/// AUC of scores a y on data.
double TestAuc(const LabelledData& data, const Eigen::VectorXd& y);

/// Mean of the last quarter of a trajectory (at least one point).
double Plateau(const std::vector<TrialStats>& trajectory);

ResultTable ExperimentAvg(const ExperimentConfig& cfg, bool force);
ResultTable ExperimentNle(const ExperimentConfig& cfg, bool force);
ResultTable ExperimentLogistic(const ExperimentConfig& cfg, bool force);

/// "k1=v1;k2=v2" with numbers in shortest round-trip form.
std::string Params(std::initializer_list<std::pair<const char*, double>> kv);

}  // namespace ppsc::harness

#endif  // PPSC_HARNESS_EXPERIMENTS_HPP_
