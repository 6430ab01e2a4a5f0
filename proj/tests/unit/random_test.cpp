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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "common/oracles.hpp"
#include "ppsc/errors.hpp"

namespace ppsc {
namespace {

TEST(QTail, Examples) {
  EXPECT_DOUBLE_EQ(QTail(0.0), 0.5);
  EXPECT_NEAR(QTail(1.281551565), 0.1, 1e-9);
  EXPECT_NEAR(QTail(-40.0), 1.0, 1e-15);
}

TEST(QTail, MatchesMultiprecisionAcrossRange) {
  for (double w = -8.0; w <= 30.0; w += 0.37) {
    const double ref = oracle::QTail(w);
    EXPECT_NEAR(QTail(w) / ref, 1.0, 1e-12) << "w=" << w;
  }
}

TEST(QInverse, Examples) {
  EXPECT_NEAR(QInverse(0.5), 0.0, 1e-12);
  EXPECT_NEAR(QInverse(0.1), 1.281551565, 1e-8);
  EXPECT_NEAR(QInverse(1e-6), 4.753424, 1e-5);
}

TEST(QInverse, MatchesMultiprecisionAndInvertsQTail) {
  for (double d : {0.49, 0.3, 0.1, 1e-2, 1e-4, 1e-6, 1e-9, 1e-12, 1e-20, 1e-100}) {
    EXPECT_NEAR(QInverse(d), oracle::QInverse(d), 1e-10 * (1.0 + oracle::QInverse(d)));
    EXPECT_NEAR(QTail(QInverse(d)) / d, 1.0, 1e-10);
  }
}

TEST(QInverse, RejectsOutOfRange) {
  for (double d : {0.0, 0.6, -0.1, 1.0}) {
    EXPECT_THROW(QInverse(d), Error) << d;
  }
}

TEST(Kappa, Examples) {
  EXPECT_NEAR(Kappa(1.0, 0.1), 1.59502, 1e-5);
  // The quoted 4753.66 is a rounded figure; the root itself is 4753.529.
  EXPECT_NEAR(Kappa(1e-3, 1e-6), 4753.66, 0.2);
  EXPECT_NEAR(Kappa(1e-3, 1e-6), oracle::Kappa(1e-3, 1e-6), 1e-8);
}

TEST(Kappa, RootIdentityOnGrid) {
  for (double eps : {1e-3, 1e-2, 0.1, 1.0, 5.0}) {
    for (double delta : {1e-9, 1e-6, 1e-3, 0.1, 0.4}) {
      const double k = Kappa(eps, delta);
      EXPECT_GT(k, 0.0);
      EXPECT_NEAR(eps * k * k - QInverse(delta) * k - 0.5, 0.0, 1e-9 * std::max(1.0, k));
      EXPECT_NEAR(k / oracle::Kappa(eps, delta), 1.0, 1e-10);
    }
  }
}

TEST(Kappa, RejectsBadBudget) {
  EXPECT_THROW(Kappa(0.0, 0.1), Error);
  EXPECT_THROW(Kappa(1.0, 0.7), Error);
}

TEST(Stream, SameTripleSameSequence) {
  Stream a(42, 3, "stage"), b(42, 3, "stage");
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.Gaussian(1.0), b.Gaussian(1.0));
  Stream c(42, 4, "stage"), d(42, 3, "other");
  Stream e(42, 3, "stage");
  EXPECT_NE(c.Gaussian(1.0), e.Gaussian(1.0));
  EXPECT_NE(d.seed(), Stream(42, 3, "stage").seed());
}

TEST(Stream, ChildrenAreDistinct) {
  Stream root(1, 0, "x");
  EXPECT_NE(root.Child("l", 0).seed(), root.Child("l", 1).seed());
  EXPECT_EQ(root.Child("l", 5).seed(), Stream(1, 0, "x").Child("l", 5).seed());
}

TEST(Stream, ZeroSigmaConsumesNothing) {
  Stream a(9, 0, "g"), b(9, 0, "g");
  EXPECT_EQ(a.Gaussian(0.0), 0.0);
  EXPECT_TRUE(a.Gaussian(4, 0.0).isZero(0.0));
  EXPECT_EQ(a.Gaussian(1.0), b.Gaussian(1.0));
}

TEST(Stream, GaussianMomentsWithinCltBounds) {
  Stream s(2026, 0, "moments");
  const int n = 1000000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = s.Gaussian(1.0);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  EXPECT_LT(std::abs(mean), 0.005);
  EXPECT_NEAR(sq / n - mean * mean, 1.0, 0.01);
}

TEST(Stream, VectorGaussianPerCoordinateVariance) {
  Stream s(5, 0, "vec");
  const int n = 200000;
  Eigen::Vector3d sq = Eigen::Vector3d::Zero();
  for (int i = 0; i < n; ++i) sq += s.Gaussian(3, 2.0).cwiseAbs2();
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(sq(k) / n, 4.0, 4.0 * 3 * std::sqrt(2.0 / n));
}

TEST(Stream, UniformIndexIsUniform) {
  Stream s(11, 0, "u");
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[s.UniformIndex(7)];
  const double p = 1.0 / 7, sd = std::sqrt(n * p * (1 - p));
  for (int c : counts) EXPECT_NEAR(c, n * p, 4 * sd);
}

}  // namespace
}  // namespace ppsc
