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

#include "ppsc/consensus.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "ppsc/errors.hpp"

namespace ppsc {
namespace {

Eigen::VectorXd TableOne() {
  Eigen::VectorXd d(10);
  d << 10, 100, 20, -30, -20, 60, 70, 0, 80, -20;
  return d;
}

PrivateGraph ThreePaths() {
  std::vector<Edge> e{{0, 1}, {1, 2}, {2, 3}, {4, 5}, {5, 6}, {7, 8}, {8, 9}};
  return PrivateGraph::Build(10, e);
}

TEST(AverageStep, ConsensualStateIsFixed) {
  auto g = PublicGraph::Cycle(6, 0.2);
  Eigen::MatrixXd x = Eigen::MatrixXd::Constant(6, 2, 3.25);
  const Eigen::MatrixXd before = x;
  AverageStep(x, g);
  EXPECT_TRUE(x.isApprox(before, 0.0));
}

TEST(AverageStep, TwoNodesAverageExactly) {
  std::vector<Edge> e{{0, 1}};
  auto g = PublicGraph::Build(2, e, 0.5);
  Eigen::MatrixXd x(2, 1);
  x << 1, 0;
  AverageStep(x, g);
  EXPECT_DOUBLE_EQ(x(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(x(1, 0), 0.5);
}

TEST(AverageStep, MatchesLaplacianProduct) {
  auto g = PublicGraph::Cycle(7, 0.1);
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(7, 3);
  const Eigen::MatrixXd expect = x - g.laplacian() * x;
  AverageStep(x, g);
  EXPECT_LE((x - expect).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Disagreement, Basics) {
  Eigen::MatrixXd x(2, 1);
  x << 1, 3;
  EXPECT_DOUBLE_EQ(DisagreementSq(x), 2.0);
  Eigen::RowVectorXd t(1);
  t << 0.0;
  EXPECT_DOUBLE_EQ(DistanceToBroadcastSq(x, t), 10.0);
}

TEST(RunConsensus, NoiselessConvergesToTableMean) {
  auto g = PublicGraph::Cycle(10, 0.1);
  auto gp = ThreePaths();
  Stream s(1, 0, "c");
  auto run = RunConsensus(TableOne(), g, gp, {1, 2000, 0.0}, s);
  EXPECT_NEAR(TableOne().mean(), 27.0, 1e-15);
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(run.final_state(i), 27.0, 1e-9);
  EXPECT_EQ(run.error_by_step.size(), 1u + 1u + 2000u);
  EXPECT_NEAR(run.final_error, run.error_by_step.back(), 0.0);
}

TEST(RunConsensus, EqualInputsStillConvergeDespiteShuffling) {
  auto g = PublicGraph::Cycle(10, 0.1);
  auto gp = ThreePaths();
  Stream s(2, 0, "c");
  auto run = RunConsensus(Eigen::VectorXd::Constant(10, 4.0), g, gp, {5, 600, 10.0}, s);
  EXPECT_GT(run.error_by_step[5], 1.0);  // perturbed after PPSC
  EXPECT_NEAR(run.final_state.sum(), 40.0, 1e-9);
  EXPECT_LT(run.final_error, 1e-6);
}

TEST(RunConsensus, TrajectoryAndEavesdropperView) {
  auto g = PublicGraph::Cycle(10, 0.1);
  auto gp = ThreePaths();
  Stream s(3, 0, "c");
  auto run = RunConsensus(TableOne(), g, gp, {4, 6, 1.0}, s, {.record_trajectory = true});
  ASSERT_EQ(run.trajectory.size(), 11u);
  auto view = run.EavesdropperView();
  ASSERT_EQ(view.size(), 6u);
  EXPECT_EQ(view.front(), run.trajectory[4]);
  EXPECT_EQ(view.back(), run.trajectory[9]);
  EXPECT_EQ(run.trajectory.back(), run.final_state);
  for (const auto& x : run.trajectory) EXPECT_NEAR(x.sum(), 270.0, 1e-9);
}

TEST(RunConsensus, EmpiricalMseUnderAnalyticBound) {
  auto g = PublicGraph::Cycle(10, 0.1);
  auto gp = ThreePaths();
  const Eigen::VectorXd d = TableOne();
  const int steps = 8, t = 150;
  const double sigma = 20.0;
  double mse = 0.0;
  const int trials = 300;
  for (int k = 0; k < trials; ++k) {
    Stream s(4, k, "c");
    mse += RunConsensus(d, g, gp, {steps, t, sigma}, s).final_error / trials;
  }
  EXPECT_LE(mse, ConsensusMseBound(g, gp, d.squaredNorm(), steps, t, sigma));
}

TEST(ConsensusMseBound, ClosedForm) {
  auto g = PublicGraph::Cycle(10, 0.1);
  auto gp = ThreePaths();
  const double b = ConsensusMseBound(g, gp, 27100.0, 16, 333, 621.2);
  const double expect = (10 * 27100.0 + 2 * 9 * 256 * 621.2 * 621.2) *
                        std::pow(1 - g.lambda_g(), 2 * 333);
  EXPECT_NEAR(b / expect, 1.0, 1e-12);
}

TEST(RunConsensus, Validates) {
  auto g = PublicGraph::Cycle(10, 0.1);
  auto gp = ThreePaths();
  Stream s(0, 0, "c");
  EXPECT_THROW(RunConsensus(TableOne(), g, gp, {0, 1, 0.0}, s), Error);
  EXPECT_THROW(RunConsensus(Eigen::VectorXd::Zero(3), g, gp, {1, 1, 0.0}, s), Error);
}

}  // namespace
}  // namespace ppsc
