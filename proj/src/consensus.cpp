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
#include <string>

#include "ppsc/errors.hpp"

namespace ppsc {

void AverageStep(Eigen::MatrixXd& x, const PublicGraph& g) {
  const double a = g.weight();
  Eigen::MatrixXd next = x;
  const auto& nb = g.neighbors();
  for (int i = 0; i < g.n(); ++i) {
    for (int j : nb[i]) next.row(i) += a * (x.row(j) - x.row(i));
  }
  x.swap(next);
}

double DisagreementSq(const Eigen::MatrixXd& x) {
  const Eigen::RowVectorXd mean = x.colwise().mean();
  return (x.rowwise() - mean).squaredNorm();
}

double DistanceToBroadcastSq(const Eigen::MatrixXd& x, const Eigen::RowVectorXd& target) {
  return (x.rowwise() - target).squaredNorm();
}

PpscTranscript GossipThenAverage(Eigen::MatrixXd& x, const PublicGraph& g,
                                 const PrivateGraph& gp, int steps, int averaging,
                                 double sigma_gamma, Stream& stream) {
  PpscTranscript tr =
      RunPpsc(x, gp, PpscConfig(steps, sigma_gamma, static_cast<int>(x.cols())), stream);
  for (int t = 0; t < averaging; ++t) AverageStep(x, g);
  return tr;
}

std::vector<Eigen::VectorXd> ConsensusRun::EavesdropperView() const {
  if (trajectory.empty()) return {};
  return {trajectory.begin() + plan.steps,
          trajectory.begin() + plan.steps + plan.averaging};
}

ConsensusRun RunConsensus(const Eigen::VectorXd& d, const PublicGraph& g,
                          const PrivateGraph& gp, const ConsensusPlan& plan,
                          Stream& stream, const ConsensusOptions& options) {
  if (plan.steps < 1 || plan.averaging < 1) {
    throw Error(ErrorKind::kInvalidArgument, "consensus needs S >= 1 and T >= 1");
  }
  if (d.size() != g.n() || gp.n() != g.n()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "inputs, public graph and private graph must share n");
  }
  ConsensusRun run;
  run.inputs = d;
  run.plan = plan;
  const double mean = d.mean();
  auto error_of = [mean](const Eigen::MatrixXd& x) {
    return (x.array() - mean).square().sum();
  };

  Eigen::MatrixXd x = d;
  run.error_by_step.reserve(plan.steps + plan.averaging + 1);
  run.error_by_step.push_back(error_of(x));
  if (options.record_trajectory) run.trajectory.push_back(x.col(0));

  const PpscConfig cfg(plan.steps, plan.sigma_gamma, 1);
  run.transcript.n = gp.n();
  run.transcript.dim = 1;
  run.transcript.steps = plan.steps;
  run.transcript.touched.assign(gp.n(), false);
  for (int k = 0; k < gp.q(); ++k) {
    if (gp.components()[k].size() >= 2) run.transcript.active_components.push_back(k);
  }
  for (int t = 1; t <= plan.steps; ++t) {
    for (auto& rec : PpscStep(x, gp, cfg.sigma_gamma(), stream, t)) {
      run.transcript.touched[rec.sender] = true;
      run.transcript.touched[rec.receiver] = true;
      run.transcript.records.push_back(std::move(rec));
    }
    run.error_by_step.push_back(error_of(x));
    if (options.record_trajectory) run.trajectory.push_back(x.col(0));
  }
  for (int t = 0; t < plan.averaging; ++t) {
    AverageStep(x, g);
    run.error_by_step.push_back(error_of(x));
    if (options.record_trajectory) run.trajectory.push_back(x.col(0));
  }
  run.final_state = x.col(0);
  run.final_error = run.error_by_step.back();
  return run;
}

double ConsensusMseBound(const PublicGraph& g, const PrivateGraph& gp,
                         double data_norm_sq, int steps, int averaging,
                         double sigma_gamma) {
  const double q = gp.q();
  const double s = steps;
  const double base = g.n() * data_norm_sq + 2.0 * q * q * s * s * sigma_gamma * sigma_gamma;
  return base * std::pow(1.0 - g.lambda_g(), 2.0 * averaging);
}

}  // namespace ppsc
