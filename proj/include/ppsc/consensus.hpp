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

#ifndef PPSC_CONSENSUS_HPP_
#define PPSC_CONSENSUS_HPP_

#include <vector>

#include <Eigen/Dense>

#include "ppsc/graph.hpp"
#include "ppsc/ppsc.hpp"
#include "ppsc/random.hpp"

namespace ppsc {

/// x_i <- x_i + a * sum_{j in N_i} (x_j - x_i), applied to every column.
void AverageStep(Eigen::MatrixXd& x, const PublicGraph& g);

/// Squared distance of x (n x m) to its own column means broadcast to all
/// rows, i.e. ||x - (1/n) 1 1^T x||^2.
double DisagreementSq(const Eigen::MatrixXd& x);

/// Squared distance of x to the broadcast of target (1 x m).
double DistanceToBroadcastSq(const Eigen::MatrixXd& x, const Eigen::RowVectorXd& target);

/// S PPSC steps over gp followed by T averaging steps over g, in place. The
/// shared inner stage of all three solvers.
PpscTranscript GossipThenAverage(Eigen::MatrixXd& x, const PublicGraph& g,
                                 const PrivateGraph& gp, int steps, int averaging,
                                 double sigma_gamma, Stream& stream);

struct ConsensusPlan {
  int steps = 1;      // S
  int averaging = 1;  // T
  double sigma_gamma = 0.0;
};

struct ConsensusOptions {
  bool record_trajectory = false;
};

// One run of PPSC-gossip averaging consensus.
struct ConsensusRun {
  Eigen::VectorXd inputs;
  ConsensusPlan plan;
  PpscTranscript transcript;

  /// x_0 .. x_{S+T} when record_trajectory was set; otherwise empty.
  std::vector<Eigen::VectorXd> trajectory;

  /// ||x_s - mean(d) 1||^2 for s = 0 .. S+T (always recorded).
  std::vector<double> error_by_step;

  Eigen::VectorXd final_state;
  double final_error = 0.0;

  /// x_S .. x_{S+T-1}: the states broadcast over the public graph.
  std::vector<Eigen::VectorXd> EavesdropperView() const;
};

/// Throws kInvalidArgument when S or T < 1, kDimensionMismatch on size.
ConsensusRun RunConsensus(const Eigen::VectorXd& d, const PublicGraph& g,
                          const PrivateGraph& gp, const ConsensusPlan& plan,
                          Stream& stream, const ConsensusOptions& options = {});

/// Mean-square error bound (n ||x0||^2 + 2 q^2 S^2 sigma^2)(1 - lambda_g)^{2T}.
double ConsensusMseBound(const PublicGraph& g, const PrivateGraph& gp,
                         double data_norm_sq, int steps, int averaging,
                         double sigma_gamma);

}  // namespace ppsc

#endif  // PPSC_CONSENSUS_HPP_
