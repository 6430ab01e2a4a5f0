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

#include "ppsc/privacy_audit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ppsc/errors.hpp"
#include "ppsc/ppsc.hpp"
#include "ppsc/random.hpp"

namespace ppsc {

double CoveringLowerBound(const PrivateGraph& gp, int steps) {
  if (steps < 0) throw Error(ErrorKind::kInvalidArgument, "steps must be >= 0");
  const double n_max = gp.n_max();
  if (n_max <= 1.0) return 1.0;
  const double ratio = (1.0 + gp.r_dagger()) / n_max;
  const double miss = ratio >= 1.0 ? 0.0 : n_max * std::pow(1.0 - ratio, steps);
  return std::pow(std::max(0.0, 1.0 - miss), gp.q());
}

std::vector<int> FirstCoverTimes(const PrivateGraph& gp, int max_steps, std::int64_t trials,
                                 std::uint64_t seed, Execution exec) {
  if (max_steps < 1 || trials < 1) {
    throw Error(ErrorKind::kInvalidArgument, "need max_steps >= 1 and trials >= 1");
  }
  int gossiping = 0;
  for (const auto& comp : gp.components()) {
    if (comp.size() >= 2) gossiping += static_cast<int>(comp.size());
  }
  return MapTrials<int>(trials, exec, [&](std::int64_t trial) {
    if (gossiping == 0) return 0;
    Stream stream(seed, static_cast<std::uint64_t>(trial), "covering");
    std::vector<char> touched(gp.n(), 0);
    int remaining = gossiping;
    for (int s = 1; s <= max_steps; ++s) {
      for (const auto& [sender, receiver] : SelectGossipPairs(gp, stream)) {
        for (int node : {sender, receiver}) {
          if (!touched[node]) {
            touched[node] = 1;
            --remaining;
          }
        }
      }
      if (remaining == 0) return s;
    }
    return max_steps + 1;
  });
}

std::vector<CoveringEstimate> CoveringCurve(const PrivateGraph& gp, int max_steps,
                                            std::int64_t trials, std::uint64_t seed,
                                            Execution exec) {
  const std::vector<int> first = FirstCoverTimes(gp, max_steps, trials, seed, exec);
  std::vector<std::int64_t> hits(max_steps + 2, 0);
  for (int f : first) ++hits[std::min(f, max_steps + 1)];
  std::vector<CoveringEstimate> curve;
  curve.reserve(max_steps);
  std::int64_t cumulative = hits[0];
  const double n = static_cast<double>(trials);
  for (int s = 1; s <= max_steps; ++s) {
    cumulative += hits[s];
    CoveringEstimate e;
    e.steps = s;
    e.trials = trials;
    e.empirical = static_cast<double>(cumulative) / n;
    e.std_err = std::sqrt(e.empirical * (1.0 - e.empirical) / n);
    e.analytic_lb = CoveringLowerBound(gp, s);
    curve.push_back(e);
  }
  return curve;
}

CoveringEstimate EstimateCovering(const PrivateGraph& gp, int steps, std::int64_t trials,
                                  std::uint64_t seed, Execution exec) {
  return CoveringCurve(gp, steps, trials, seed, exec).back();
}

double DpDeltaBound(double epsilon, double sigma, double lambda_ppsc, double mu) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::kNonPositiveEpsilon, "epsilon must be > 0");
  if (!(sigma > 0.0) || !(lambda_ppsc > 0.0) || !(mu > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "sigma, lambda_ppsc and mu must be > 0");
  }
  const double scaled = sigma * lambda_ppsc;
  return QTail(epsilon * scaled / mu - mu / (2.0 * scaled));
}

double DeltaSharp(double epsilon, double delta, int recursions) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::kNonPositiveEpsilon, "epsilon must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorKind::kDeltaOutOfRange, "delta must lie in (0, 1)");
  }
  if (recursions < 1) throw Error(ErrorKind::kInvalidArgument, "L must be >= 1");
  // (delta + e^eps)^(1/L) - e^(eps/L) = e^(eps/L) (exp(log1p(delta e^-eps)/L) - 1)
  const double l = recursions;
  return std::exp(epsilon / l) * std::expm1(std::log1p(delta * std::exp(-epsilon)) / l);
}

CompositionAudit AuditComposition(double epsilon, double delta, int recursions) {
  CompositionAudit a;
  a.recursions = recursions;
  a.step_epsilon = epsilon / recursions;
  a.step_delta = DeltaSharp(epsilon, delta, recursions);
  a.positive = a.step_delta > 0.0;
  return a;
}

}  // namespace ppsc
