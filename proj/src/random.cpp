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

#include "ppsc/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ppsc/errors.hpp"

namespace ppsc {

double QTail(double w) { return 0.5 * std::erfc(w / std::numbers::sqrt2); }

double QInverse(double delta) {
  if (!(delta > 0.0 && delta <= 0.5)) {
    throw Error(ErrorKind::kDeltaOutOfRange,
                "delta must lie in (0, 1/2], got " + std::to_string(delta));
  }
  if (delta == 0.5) return 0.0;
  // QTail is strictly decreasing; bracket [0, 40] covers every representable
  // delta above ~1e-300.
  double lo = 0.0;
  double hi = 40.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (QTail(mid) > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double w = 0.5 * (lo + hi);
  // Newton on log Q(w) - log(delta); Q'(w) = -phi(w).
  for (int i = 0; i < 3; ++i) {
    const double q = QTail(w);
    const double phi = std::exp(-0.5 * w * w) / std::sqrt(2.0 * std::numbers::pi);
    if (q <= 0.0 || phi <= 0.0) break;
    const double step = (std::log(q) - std::log(delta)) * q / phi;
    if (!std::isfinite(step)) break;
    w += step;
  }
  return w;
}

double Kappa(double epsilon, double delta) {
  if (!(epsilon > 0.0)) {
    throw Error(ErrorKind::kNonPositiveEpsilon,
                "epsilon must be positive, got " + std::to_string(epsilon));
  }
  if (!(delta > 0.0 && delta < 0.5)) {
    throw Error(ErrorKind::kDeltaOutOfRange,
                "delta must lie in (0, 1/2), got " + std::to_string(delta));
  }
  const double w = QInverse(delta);
  return (w + std::sqrt(w * w + 2.0 * epsilon)) / (2.0 * epsilon);
}

std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t HashLabel(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Stream::Stream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

Stream::Stream(std::uint64_t root, std::uint64_t trial, std::string_view stage)
    : Stream(Mix64(Mix64(Mix64(root) ^ trial) ^ HashLabel(stage))) {}

Stream Stream::Child(std::string_view stage, std::uint64_t index) const {
  return Stream(Mix64(Mix64(seed_ ^ HashLabel(stage)) + index));
}

double Stream::Gaussian(double sigma) {
  if (sigma < 0.0) {
    throw Error(ErrorKind::kNegativeSigma,
                "sigma must be nonnegative, got " + std::to_string(sigma));
  }
  if (sigma == 0.0) return 0.0;
  return sigma * normal_(engine_);
}

Eigen::VectorXd Stream::Gaussian(Eigen::Index m, double sigma) {
  Eigen::VectorXd out(m);
  for (Eigen::Index i = 0; i < m; ++i) out[i] = Gaussian(sigma);
  return out;
}

std::size_t Stream::UniformIndex(std::size_t bound) {
  std::uniform_int_distribution<std::size_t> dist(0, bound - 1);
  return dist(engine_);
}

double Stream::Uniform01() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

}  // namespace ppsc
