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

#ifndef PPSC_HARNESS_CONFIG_HPP_
#define PPSC_HARNESS_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "ppsc/graph.hpp"
#include "ppsc/linear_eq.hpp"
#include "ppsc/optim.hpp"
#include "ppsc/planner.hpp"

namespace ppsc::harness {

struct PublicGraphSpec {
  int n = 0;
  std::string topology;  // "cycle" or empty when edges are listed
  std::vector<Edge> edges;
  double weight = 0.0;
};

struct PrivateGraphSpec {
  int n = 0;  // defaults to the public n
  std::vector<Edge> edges;
};

struct Overrides {
  std::optional<int> steps;        // S
  std::optional<int> averaging;    // T
  std::optional<int> recursions;   // L
  std::optional<double> sigma_gamma;
  std::optional<double> epsilon0;
  std::optional<double> lambda_ppsc;
};

struct SetSpec {
  std::string shape = "ball";  // "ball" or "box"
  Eigen::VectorXd center;      // ball; empty means origin
  double radius = 1.0;
  Eigen::VectorXd lo, hi;      // box
};

struct MnistSpec {
  std::string train_images, train_labels, test_images, test_labels;
  std::vector<int> positive_digits{0};
  int train_limit = 6000;
  int test_limit = 1000;
};

struct StepsizeSpec {
  std::string rule = "harmonic";  // harmonic | power | constant
  double scale = 1.0;
  double exponent = 1.0;
};

struct TaskSpec {
  std::string kind;  // average | nle | quadratic | logistic

  Eigen::VectorXd data;  // average

  std::string system = "benchmark";  // nle: "benchmark" or a file path
  bool least_squares = false;
  std::optional<Eigen::VectorXd> zeta0;

  std::vector<Eigen::VectorXd> centers;  // quadratic
  int dim = 3;                           // quadratic when centers are generated

  std::string dataset = "synthetic";  // logistic: synthetic | csv | mnist
  int samples = 500;
  int test_samples = 500;
  int features = 5;
  double separation = 3.0;
  double lambda = 0.1;
  std::string csv_train, csv_test;
  MnistSpec mnist;

  SetSpec set;
  StepsizeSpec stepsize;
};

struct GridSpec {
  std::vector<double> epsilons;
  std::vector<double> nus;
  int covering_max_steps = 40;
  std::int64_t covering_trials = 100000;
  int curve_trials = 20;
  int max_doublings = 12;
};

// One experiment or solver invocation, read from a JSON file. Every object
// rejects keys it does not know.
struct ExperimentConfig {
  PublicGraphSpec public_graph;
  PrivateGraphSpec private_graph;
  Budget budget;
  Overrides overrides;
  TaskSpec task;
  GridSpec grid;
  std::uint64_t seed = 0;
  std::int64_t trials = 100;
  std::string out;
  std::filesystem::path base_dir;  // relative file paths resolve against this

  PublicGraph BuildPublicGraph() const;
  PrivateGraph BuildPrivateGraph() const;
  EquationSystem BuildEquationSystem() const;
  ConvexSet BuildSet(Eigen::Index dim) const;
  StepsizeSchedule BuildStepsize() const;
  PlannerOptions BuildPlannerOptions() const;
  std::string Resolve(const std::string& path) const;
};

/// Throws Error(kConfig) naming the offending key.
ExperimentConfig ParseConfig(const nlohmann::json& doc,
                             const std::filesystem::path& base_dir = {});
ExperimentConfig LoadConfig(const std::string& path);

/// Replaces planner outputs with config overrides. An override below the
/// planner's bound throws kBoundViolation naming the bound unless force is
/// set, in which case the returned flag is "forced".
std::string ApplyOverrides(Plan& plan, const Overrides& overrides, bool force);

}  // namespace ppsc::harness

#endif  // PPSC_HARNESS_CONFIG_HPP_
