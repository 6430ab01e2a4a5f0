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

#ifndef PPSC_RANDOM_HPP_
#define PPSC_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Dense>

namespace ppsc {

/// Standard normal upper tail Q(w) = P(Z >= w).
double QTail(double w);

/// Inverse of QTail on (0, 1/2]. Bisection on [0, 40] followed by a Newton
/// polish step. Throws kDeltaOutOfRange outside that interval.
double QInverse(double delta);

/// Noise multiplier kappa(eps, delta): the positive root of
/// eps * k^2 - QInverse(delta) * k - 1/2 = 0.
double Kappa(double epsilon, double delta);

/// 64-bit finalizer from SplitMix64; used to derive substream seeds.
std::uint64_t Mix64(std::uint64_t x);

/// Stable 64-bit hash of a stage label (FNV-1a).
std::uint64_t HashLabel(std::string_view label);

// A reproducible random stream identified by (root, trial, stage). Two streams
// with the same triple produce identical sequences regardless of the order or
// thread they are created on, which is what lets Monte-Carlo trials run in
// parallel with results identical to the serial loop.
class Stream {
 public:
  Stream(std::uint64_t root, std::uint64_t trial, std::string_view stage);

  /// Derives an independent child stream, e.g. one per recursion.
  Stream Child(std::string_view stage, std::uint64_t index = 0) const;

  /// N(0, sigma^2); sigma == 0 returns exactly 0 without consuming entropy.
  double Gaussian(double sigma);
  Eigen::VectorXd Gaussian(Eigen::Index m, double sigma);

  /// Uniform integer in [0, bound).
  std::size_t UniformIndex(std::size_t bound);
  double Uniform01();

  std::uint64_t seed() const { return seed_; }

 private:
  explicit Stream(std::uint64_t seed);

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace ppsc

#endif  // PPSC_RANDOM_HPP_
