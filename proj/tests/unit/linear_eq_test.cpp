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

#include "ppsc/linear_eq.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>
#include <Eigen/Eigenvalues>

#include "ppsc/errors.hpp"

namespace ppsc {
namespace {

Eigen::VectorXd V(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

ErrorKind KindOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kInvalidArgument;
}

TEST(AffineEquation, ProjectExample) {
  AffineEquation eq(V({1, 0}), 2.0);
  EXPECT_TRUE(eq.Project(V({3, 5})).isApprox(V({2, 5})));
}

TEST(AffineEquation, ProjectionIsIdempotentWithZeroResidual) {
  Stream s(8, 0, "proj");
  for (int k = 0; k < 200; ++k) {
    AffineEquation eq(s.Gaussian(5, 1.0), s.Gaussian(3.0));
    const Eigen::VectorXd x = s.Gaussian(5, 10.0);
    const Eigen::VectorXd p = eq.Project(x);
    EXPECT_NEAR(eq.h().dot(p), eq.z(), 1e-10 * (1 + std::abs(eq.z()) + x.norm()));
    EXPECT_LE((eq.Project(p) - p).norm(), 1e-10 * (1 + p.norm()));
    // x - p is normal to the hyperplane.
    EXPECT_NEAR((x - p).normalized().cwiseAbs().dot(eq.h().normalized().cwiseAbs()), 1.0, 1e-9);
  }
}

TEST(AffineEquation, ScaleInvariance) {
  AffineEquation a(V({1, 1}), 3.0);
  AffineEquation b(V({10, 10}), 30.0);
  const Eigen::VectorXd x = V({-2, 7});
  EXPECT_LE((a.Project(x) - b.Project(x)).norm(), 1e-14);
  EXPECT_NEAR(RotationalDistance(a, b), 0.0, 1e-15);
  EXPECT_NEAR(TranslationalDistance(a, b), 0.0, 1e-15);
  AffineEquation c(V({1, 0}), 1.0);
  AffineEquation d(V({-4, 0}), -4.0);
  EXPECT_NEAR(RotationalDistance(a, c), RotationalDistance(b, d), 1e-14);
  EXPECT_NEAR(TranslationalDistance(a, c), TranslationalDistance(b, d), 1e-14);
}

TEST(AffineEquation, PointOnHyperplaneUnchanged) {
  AffineEquation eq(V({2, -1, 3}), 4.0);
  const Eigen::VectorXd x = V({1, 1, 1});
  EXPECT_LE((eq.Project(x) - x).norm(), 1e-15);
}

TEST(AffineEquation, ZeroNormalRejected) {
  EXPECT_THROW(AffineEquation(V({0, 0}), 1.0), Error);
}

TEST(Distances, Examples) {
  AffineEquation e1(V({1, 0}), 1.0), e2(V({0, 1}), 1.0);
  EXPECT_NEAR(RotationalDistance(e1, e1), 0.0, 1e-15);
  EXPECT_NEAR(RotationalDistance(e1, e2), 1.0, 1e-14);
  EXPECT_NEAR(TranslationalDistance(e1, e1), 0.0, 1e-15);
  EXPECT_NEAR(TranslationalDistance(AffineEquation(V({1, 0}), 2.0),
                                    AffineEquation(V({1, 0}), 5.0)),
              3.0, 1e-15);
  EXPECT_NEAR(TranslationalDistance(e1, e2), std::numbers::sqrt2, 1e-15);
}

TEST(Distances, TriangleInequality) {
  Stream s(12, 0, "tri");
  for (int k = 0; k < 100; ++k) {
    AffineEquation a(s.Gaussian(3, 1.0), s.Gaussian(1.0));
    AffineEquation b(s.Gaussian(3, 1.0), s.Gaussian(1.0));
    AffineEquation c(s.Gaussian(3, 1.0), s.Gaussian(1.0));
    EXPECT_LE(RotationalDistance(a, c),
              RotationalDistance(a, b) + RotationalDistance(b, c) + 1e-12);
    EXPECT_LE(TranslationalDistance(a, c),
              TranslationalDistance(a, b) + TranslationalDistance(b, c) + 1e-12);
    EXPECT_LE(RotationalDistance(a, b), 1.0 + 1e-12);
  }
}

EquationSystem Axes(double z2) {
  return EquationSystem({AffineEquation(V({1, 0}), 1.0), AffineEquation(V({0, 1}), z2)});
}

TEST(MuAdjacent, Examples) {
  auto a = Axes(1.0);
  EXPECT_TRUE(MuAdjacent(a, a, 1e-9));
  // Agent 2 turns from e2 (z=0) to e1 (z=0.2): rotational 1 + translational 0.2.
  const AffineEquation e3(V({1, 1}), 1.0);
  EquationSystem d({AffineEquation(V({1, 0}), 1.0), AffineEquation(V({0, 1}), 0.0), e3},
                   EquationSystem::Mode::kLeastSquares);
  EquationSystem f({AffineEquation(V({1, 0}), 1.0), AffineEquation(V({1, 0}), 0.2), e3},
                   EquationSystem::Mode::kLeastSquares);
  EXPECT_FALSE(MuAdjacent(d, f, 1.0));
  EXPECT_TRUE(MuAdjacent(d, f, 1.2 + 1e-12));
}

TEST(MuAdjacent, BoundaryIsInclusive) {
  auto a = Axes(1.0);
  auto b = Axes(1.5);
  const double exact = TranslationalDistance(a.equations()[1], b.equations()[1]);
  EXPECT_TRUE(MuAdjacent(a, b, exact));
  EXPECT_FALSE(MuAdjacent(a, b, std::nextafter(exact, 0.0)));
}

TEST(MuAdjacent, DimensionMismatch) {
  auto a = Axes(1.0);
  EquationSystem b({AffineEquation(V({1, 0, 0}), 1.0), AffineEquation(V({0, 1, 0}), 1.0),
                    AffineEquation(V({0, 0, 1}), 1.0)});
  EXPECT_EQ(KindOf([&] { MuAdjacent(a, b, 1.0); }), ErrorKind::kDimensionMismatch);
}

TEST(LambdaH, Examples) {
  EXPECT_NEAR(LambdaH({AffineEquation(V({1, 0}), 0), AffineEquation(V({0, 1}), 0)}), 0.5,
              1e-14);
  for (int n : {3, 5, 8}) {
    std::vector<AffineEquation> eqs;
    for (int i = 0; i < n; ++i) eqs.emplace_back(Eigen::VectorXd::Unit(n, i), 0.0);
    EXPECT_NEAR(LambdaH(eqs), 1.0 - 1.0 / n, 1e-14);
  }
  EXPECT_EQ(KindOf([] {
              LambdaH({AffineEquation(V({1, 1}), 0), AffineEquation(V({2, 2}), 1)});
            }),
            ErrorKind::kRankDeficient);
}

TEST(EquationSystem, BenchmarkSolution) {
  auto sys = BenchmarkSystem();
  EXPECT_EQ(sys.n(), 10);
  EXPECT_EQ(sys.m(), 6);
  EXPECT_LE((sys.y_star() - V({5, -10, 10, -5, 1, 5})).norm(), 1e-10);
  EXPECT_GT(sys.lambda_h(), 0.0);
  EXPECT_LT(sys.lambda_h(), 1.0);
}

TEST(EquationSystem, ParseMatchesBenchmark) {
  std::istringstream in(
      "# comment\n1 2 0 0 0 0 -15\n1 1 1 0 0 0 5\n0 1 1 0 0 3 15\n\n"
      "0 -1 1 2 5 -2 5\n5 -2 0 2 0 1 40\n2 0 1 0 2 1 27\n1 1 1 2 0 1 0\n"
      "3 1 5 6 8 -2 23\n0 -2 0 1 5 0 20\n0 0 0 0 2 -1 -3\n");
  auto sys = EquationSystem::Parse(in);
  EXPECT_EQ(sys.h(), BenchmarkSystem().h());
  EXPECT_EQ(sys.z(), BenchmarkSystem().z());
  std::istringstream ragged("1 2 3\n1 2\n");
  EXPECT_THROW(EquationSystem::Parse(ragged), Error);
}

TEST(EquationSystem, InconsistentRejectedUnlessLeastSquares) {
  std::vector<AffineEquation> eqs{AffineEquation(V({1, 0}), 1), AffineEquation(V({0, 1}), 1),
                                  AffineEquation(V({1, 1}), 3)};
  EXPECT_EQ(KindOf([&] { EquationSystem s(eqs); }), ErrorKind::kInconsistent);
  EquationSystem ls(eqs, EquationSystem::Mode::kLeastSquares);
  // Normal equations: [[2,1],[1,2]] y = [4,4] -> y = (4/3, 4/3).
  EXPECT_LE((ls.y_star() - V({4.0 / 3, 4.0 / 3})).norm(), 1e-12);
}

TEST(EquationSystem, BlockOperatorsMatchPerAgentProjection) {
  auto sys = BenchmarkSystem();
  Stream s(3, 0, "blk");
  const Eigen::VectorXd x = s.Gaussian(60, 4.0);
  const Eigen::VectorXd stacked =
      x - sys.BlockProjector() * x + sys.BlockOffset();
  for (int i = 0; i < 10; ++i) {
    EXPECT_LE((stacked.segment(6 * i, 6) - sys.equations()[i].Project(x.segment(6 * i, 6))).norm(),
              1e-10);
  }
}

TEST(EquationSystem, AveragedProjectorContractsAtLambdaH) {
  // K = (1/n)(I - block projector)(1 1^T (x) I_m). Its spectral radius is
  // lambda_h; the one-step operator norm is sqrt(lambda_h), and iterates
  // obey ||K^l|| <= sqrt(n) lambda_h^(l-1) sqrt(lambda_h).
  auto sys = BenchmarkSystem();
  const int n = sys.n();
  const Eigen::Index m = sys.m();
  Eigen::MatrixXd ones = Eigen::MatrixXd::Zero(n * m, n * m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) ones.block(i * m, j * m, m, m) = Eigen::MatrixXd::Identity(m, m);
  }
  const Eigen::MatrixXd op =
      (Eigen::MatrixXd::Identity(n * m, n * m) - sys.BlockProjector()) * ones / n;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(op);
  EXPECT_NEAR(svd.singularValues()(0), std::sqrt(sys.lambda_h()), 1e-10);
  Eigen::EigenSolver<Eigen::MatrixXd> es(op);
  EXPECT_NEAR(es.eigenvalues().cwiseAbs().maxCoeff(), sys.lambda_h(), 1e-10);
  Eigen::MatrixXd power = op;
  for (int l = 1; l <= 40; ++l) {
    Eigen::JacobiSVD<Eigen::MatrixXd> sv(power);
    EXPECT_LE(sv.singularValues()(0),
              std::sqrt(static_cast<double>(n)) * std::pow(sys.lambda_h(), l - 1) *
                      std::sqrt(sys.lambda_h()) + 1e-12);
    power = op * power;
  }
}

TEST(RunNle, NoiselessConvergesToSolution) {
  auto sys = BenchmarkSystem();
  auto g = PublicGraph::Cycle(10, 0.25);
  std::vector<Edge> e{{0, 1}, {1, 2}, {2, 3}, {4, 5}, {5, 6}, {7, 8}, {8, 9}};
  auto gp = PrivateGraph::Build(10, e);
  Stream s(1, 0, "nle");
  auto run = RunNle(sys, g, gp, {1, 200, 1400, 0.0}, Eigen::VectorXd::Zero(6), s);
  ASSERT_EQ(run.recursions.size(), 1400u);
  for (int i = 0; i < 10; ++i) {
    EXPECT_LE((run.final_state.row(i).transpose() - sys.y_star()).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(RunNle, SingleAgentIsOneProjection) {
  EquationSystem sys({AffineEquation(V({1}), 4.0)});
  auto g = PublicGraph::Build(1, {}, 0.5);
  auto gp = PrivateGraph::Build(1, {});
  Stream s(1, 0, "nle");
  auto run = RunNle(sys, g, gp, {1, 1, 1, 0.0}, V({0}), s);
  EXPECT_NEAR(run.final_state(0, 0), 4.0, 1e-15);
}

}  // namespace
}  // namespace ppsc
