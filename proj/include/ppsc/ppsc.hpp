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

#ifndef PPSC_PPSC_HPP_
#define PPSC_PPSC_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ppsc/graph.hpp"
#include "ppsc/random.hpp"

namespace ppsc {

// Run parameters of the multi-gossiping mechanism.
class PpscConfig {
 public:
  /// Throws kInvalidArgument for steps < 1 or dim < 1, kNegativeSigma for
  /// sigma_gamma < 0.
  PpscConfig(int steps, double sigma_gamma, int dim = 1);

  int steps() const { return steps_; }
  double sigma_gamma() const { return sigma_gamma_; }
  int dim() const { return dim_; }

 private:
  int steps_;
  double sigma_gamma_;
  int dim_;
};

/// One component's gossip in one step: the sender keeps the noise, the
/// receiver absorbs message = state[sender] - noise.
struct GossipRecord {
  int step = 0;  // 1-based step index within the run
  int component = 0;
  int sender = 0;
  int receiver = 0;
  Eigen::VectorXd noise;
  Eigen::VectorXd message;
};

// Full record of an S-step run, ordered by (step, component). Components with
// a single node never gossip and contribute no records.
struct PpscTranscript {
  int n = 0;
  int dim = 1;
  int steps = 0;
  std::vector<GossipRecord> records;

  /// Component indices that gossip (size >= 2), in order.
  std::vector<int> active_components;

  /// Nodes touched (as sender or receiver) at least once.
  std::vector<bool> touched;

  bool AllTouched() const;
};

/// Picks one oriented (sender, receiver) pair per multi-node component:
/// sender uniform over the component, receiver uniform over its neighbors.
std::vector<std::pair<int, int>> SelectGossipPairs(const PrivateGraph& gp,
                                                   Stream& stream);

/// One synchronous multi-gossip step applied in place to state (n x m).
/// Returns the records of this step (one per active component).
std::vector<GossipRecord> PpscStep(Eigen::MatrixXd& state, const PrivateGraph& gp,
                                   double sigma, Stream& stream, int step_index = 1);

/// S sequential steps applied in place; returns the transcript.
PpscTranscript RunPpsc(Eigen::MatrixXd& state, const PrivateGraph& gp,
                       const PpscConfig& cfg, Stream& stream);

// Linear representation of a transcript: output = C * input + D * noise, where
// noise stacks per-component noise rows: row (k' * S + t - 1) holds the noise
// of the k'-th active component at step t.
struct TranscriptMatrices {
  Eigen::MatrixXd c;  // n x n
  Eigen::MatrixXd d;  // n x (q_active * S)

  /// Stacked noise (q_active * S) x m in the column order of d.
  Eigen::MatrixXd noise;

  Eigen::MatrixXd Replay(const Eigen::MatrixXd& input) const {
    return c * input + d * noise;
  }
};

/// Builds C and D from the product formulas over the step matrices. Throws
/// kMalformedTranscript if the transcript is inconsistent with gp.
TranscriptMatrices TranscriptToMatrices(const PpscTranscript& transcript,
                                        const PrivateGraph& gp);

/// Smallest nonzero singular value; 0 for an all-zero matrix.
double MinNonzeroSingularValue(const Eigen::MatrixXd& m);

enum class LambdaMethod { kExact, kMonteCarlo };

struct LambdaPpscEstimate {
  double value = 0.0;
  LambdaMethod method = LambdaMethod::kExact;
  std::int64_t samples = 0;  // sequences evaluated
};

struct LambdaPpscOptions {
  enum class Mode { kAuto, kExact, kMonteCarlo };
  Mode mode = Mode::kAuto;
  std::int64_t exact_limit = 100000;
  std::int64_t monte_carlo_samples = 10000;
};

/// Number of oriented edge sequences to enumerate: the sum over components of
/// (oriented edges)^S, saturating at INT64_MAX. Components are independent so
/// each is enumerated on its own.
std::int64_t SequenceCount(const PrivateGraph& gp, int steps);

/// Minimum over edge sequences of the smallest nonzero singular value of D.
/// kExact throws kEnumerationTooLarge beyond exact_limit; kMonteCarlo returns a
/// non-conservative estimate over sampled sequences.
LambdaPpscEstimate LambdaPpsc(const PrivateGraph& gp, int steps,
                              const LambdaPpscOptions& options, Stream& stream);

/// Line-oriented text: a header line then one line per record
/// "step component sender receiver noise_1..noise_m message_1..message_m".
void WriteTranscript(std::ostream& out, const PpscTranscript& transcript);
PpscTranscript ReadTranscript(std::istream& in, const PrivateGraph& gp);

}  // namespace ppsc

#endif  // PPSC_PPSC_HPP_
