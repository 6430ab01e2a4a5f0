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

#include "ppsc/optim.hpp"

#include <cmath>
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

PrivateGraph ThreePaths() {
  std::vector<Edge> e{{0, 1}, {1, 2}, {2, 3}, {4, 5}, {5, 6}, {7, 8}, {8, 9}};
  return PrivateGraph::Build(10, e);
}

// Brute-force pair count, the reference for Auc.
double PairAuc(const std::vector<double>& s, const std::vector<int>& b) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (b[i] != 1 || b[j] != 0) continue;
      pairs += 1.0;
      wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
    }
  }
  return wins / pairs;
}

TEST(ConvexSet, ProjectionExamples) {
  auto ball = ConvexSet::UnitBall(2);
  EXPECT_TRUE(ball.Project(V({2, 0})).isApprox(V({1, 0})));
  EXPECT_EQ(ball.Project(V({0.3, -0.4})), V({0.3, -0.4}));
  auto box = ConvexSet::MakeBox(V({0, 0}), V({1, 1}));
  EXPECT_EQ(box.Project(V({-1, 0.5})), V({0, 0.5}));
  EXPECT_DOUBLE_EQ(box.MaxNorm(), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(ConvexSet::MakeBall(V({3, 4}), 1.0).MaxNorm(), 6.0);
}

TEST(ConvexSet, ProjectionIsNonExpansiveAndFeasible) {
  Stream s(3, 0, "proj");
  auto ball = ConvexSet::MakeBall(V({1, -1, 0.5}), 2.0);
  auto box = ConvexSet::MakeBox(V({-1, 0, -2}), V({1, 3, -1}));
  for (int k = 0; k < 300; ++k) {
    const Eigen::VectorXd a = s.Gaussian(3, 5.0), b = s.Gaussian(3, 5.0);
    for (const auto* set : {&ball, &box}) {
      const Eigen::VectorXd pa = set->Project(a), pb = set->Project(b);
      EXPECT_TRUE(set->Contains(pa));
      EXPECT_LE((pa - pb).norm(), (a - b).norm() + 1e-12);
      EXPECT_LE((set->Project(pa) - pa).norm(), 1e-14);
      EXPECT_LE(pa.norm(), set->MaxNorm() + 1e-12);
    }
  }
}

TEST(ConvexSet, Validates) {
  EXPECT_THROW(ConvexSet::MakeBall(V({0}), 0.0), Error);
  EXPECT_THROW(ConvexSet::MakeBox(V({1}), V({0})), Error);
  EXPECT_THROW(ConvexSet::UnitBall(2).Project(V({1, 2, 3})), Error);
}

TEST(StepsizeSchedule, RulesAndConditions) {
  auto h = StepsizeSchedule::Harmonic();
  EXPECT_DOUBLE_EQ(h.At(0), 1.0);
  EXPECT_DOUBLE_EQ(h.At(100), 1.0 / 101);
  EXPECT_TRUE(h.SatisfiesConditions());
  EXPECT_TRUE(StepsizeSchedule::PowerLaw(2.0, 0.75).SatisfiesConditions());
  EXPECT_FALSE(StepsizeSchedule::PowerLaw(2.0, 0.5).SatisfiesConditions());
  EXPECT_FALSE(StepsizeSchedule::PowerLaw(2.0, 1.5).SatisfiesConditions());
  EXPECT_FALSE(StepsizeSchedule::Constant(0.1).SatisfiesConditions());
  EXPECT_DOUBLE_EQ(StepsizeSchedule::Constant(0.1).At(1000), 0.1);
}

TEST(MuAdjacentObjectives, Examples) {
  std::vector<Eigen::VectorXd> c{V({0, 0}), V({1, 0}), V({0, 1})};
  auto f = ObjectiveFamily::Quadratic(c, 5.0);
  EXPECT_TRUE(MuAdjacentObjectives(f, f, 0.1));
  auto far = c;
  far[1] += V({0.2, 0});
  EXPECT_FALSE(MuAdjacentObjectives(f, ObjectiveFamily::Quadratic(far, 5.0), 0.1));
  auto all = c;
  for (auto& v : all) v += V({0, 0.25});
  EXPECT_TRUE(MuAdjacentObjectives(f, ObjectiveFamily::Quadratic(all, 5.0), 0.25));
  EXPECT_THROW(MuAdjacentObjectives(f, ObjectiveFamily::Linear(c), 1.0), Error);
}

void ExpectGradientMatchesFiniteDifference(const ObjectiveFamily& f, Stream& s) {
  for (int i = 0; i < f.n(); ++i) {
    for (int rep = 0; rep < 5; ++rep) {
      const Eigen::VectorXd y = s.Gaussian(f.dim(), 1.0);
      const Eigen::VectorXd g = f.Gradient(i, y);
      for (Eigen::Index k = 0; k < f.dim(); ++k) {
        const double h = 1e-5 * (1.0 + std::abs(y[k]));
        Eigen::VectorXd yp = y, ym = y;
        yp[k] += h;
        ym[k] -= h;
        const double fd = (f.Value(i, yp) - f.Value(i, ym)) / (2 * h);
        EXPECT_NEAR(g[k], fd, 1e-4 * std::max(1.0, std::abs(fd))) << "agent " << i << " k " << k;
      }
    }
  }
}

ObjectiveFamily SmallLogistic(Stream& s, double lambda) {
  std::vector<LogisticTerm> terms;
  for (int i = 0; i < 3; ++i) {
    LogisticTerm t;
    t.features = Eigen::MatrixXd(6, 4);
    for (Eigen::Index r = 0; r < 6; ++r) t.features.row(r) = s.Gaussian(4, 1.0).transpose();
    t.labels = Eigen::VectorXd(6);
    for (Eigen::Index r = 0; r < 6; ++r) t.labels[r] = static_cast<double>(r % 2);
    terms.push_back(std::move(t));
  }
  return ObjectiveFamily::Logistic(std::move(terms), lambda);
}

TEST(ObjectiveFamily, GradientsMatchFiniteDifferences) {
  Stream s(21, 0, "fd");
  ExpectGradientMatchesFiniteDifference(
      ObjectiveFamily::Quadratic({V({1, 2, 3}), V({-1, 0, 0.5})}), s);
  ExpectGradientMatchesFiniteDifference(ObjectiveFamily::Linear({V({1, -2, 3}), V({0, 4, 1})}),
                                        s);
  ExpectGradientMatchesFiniteDifference(SmallLogistic(s, 0.3), s);
}

TEST(ObjectiveFamily, LogisticValueMatchesDirectSum) {
  Stream s(22, 0, "lv");
  auto f = SmallLogistic(s, 0.6);
  const auto& t = std::get<LogisticTerm>(f.terms()[1]);
  const Eigen::VectorXd y = s.Gaussian(4, 1.0);
  double direct = 0.0;
  for (Eigen::Index r = 0; r < t.features.rows(); ++r) {
    const double u = t.features.row(r).dot(y);
    direct += std::log(1.0 + std::exp(u)) - t.labels[r] * u;
  }
  direct += 0.6 / (2.0 * 3) * y.squaredNorm();
  EXPECT_NEAR(f.Value(1, y), direct, 1e-12);
}

TEST(ObjectiveFamily, LogisticHessianIsPositiveSemidefinite) {
  Stream s(23, 0, "hess");
  auto f = SmallLogistic(s, 0.0);
  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::VectorXd y = s.Gaussian(4, 2.0);
    Eigen::MatrixXd hess(4, 4);
    for (int k = 0; k < 4; ++k) {
      Eigen::VectorXd yp = y, ym = y;
      yp[k] += 1e-5;
      ym[k] -= 1e-5;
      hess.col(k) = (f.TotalGradient(yp) - f.TotalGradient(ym)) / 2e-5;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (hess + hess.transpose()));
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-6);
  }
}

TEST(ObjectiveFamily, ParametersFlatten) {
  auto q = ObjectiveFamily::Quadratic({V({1, 2}), V({3, 4})});
  EXPECT_EQ(q.Parameters(1), V({3, 4}));
  EXPECT_DOUBLE_EQ(q.parameter_radius(), 5.0);
  EXPECT_THROW(ObjectiveFamily::Quadratic({V({1, 2}), V({3, 4})}, 1.0), Error);
}

TEST(GDagger, Examples) {
  auto set = ConvexSet::UnitBall(2);
  auto q = ObjectiveFamily::Quadratic({V({0.5, 0}), V({0, -0.3})});
  EXPECT_NEAR(GDagger(q, set, 1.0), 2.0 * (std::sqrt(2.0) + 0.5), 1e-14);
  auto lin = ObjectiveFamily::Linear({V({3, 4}), V({1, 0})});
  EXPECT_NEAR(GDagger(lin, set, 1.0), 5.0, 1e-14);
}

TEST(GDagger, BoundsSampledGradients) {
  Stream s(24, 0, "gd");
  auto set = ConvexSet::UnitBall(4);
  auto f = SmallLogistic(s, 0.2);
  const double nu = 0.5, bound = GDagger(f, set, nu);
  for (int rep = 0; rep < 500; ++rep) {
    Eigen::VectorXd y = s.Gaussian(4, 1.0);
    y *= std::sqrt(1.0 + nu) * s.Uniform01() / y.norm();
    for (int i = 0; i < f.n(); ++i) EXPECT_LE(f.Gradient(i, y).norm(), bound);
  }
}

TEST(RunDco, NoiselessQuadraticConvergesToProjectedMean) {
  auto g = PublicGraph::Cycle(10, 0.1);
  auto gp = ThreePaths();
  Stream cs(25, 0, "centers");
  std::vector<Eigen::VectorXd> c;
  for (int i = 0; i < 10; ++i) c.push_back(cs.Gaussian(3, 1.0));
  auto f = ObjectiveFamily::Quadratic(c);
  auto set = ConvexSet::UnitBall(3);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(3);
  for (const auto& v : c) mean += v / 10.0;
  const Eigen::VectorXd ref = set.Project(mean);
  Stream s(25, 0, "run");
  DcoOptions opt;
  opt.reference = ref;
  auto run = RunDco(f, set, g, gp, {1, 200, 400, 0.0}, StepsizeSchedule::Harmonic(0.5),
                    Eigen::VectorXd::Zero(3), s, opt);
  EXPECT_LT(run.final_error, 1e-3);
  for (const auto& r : run.recursions) EXPECT_TRUE(set.Contains(r.mean_state, 1e-9));
  for (int i = 0; i < 10; ++i) {
    EXPECT_TRUE(set.Contains(run.final_state.row(i).transpose(), 1e-9));
  }
}

TEST(RunDco, SingleAgentReachesInteriorOptimum) {
  auto g = PublicGraph::Build(1, {}, 0.5);
  auto gp = PrivateGraph::Build(1, {});
  auto f = ObjectiveFamily::Quadratic({V({0.2, -0.3})});
  Stream s(1, 0, "one");
  auto run = RunDco(f, ConvexSet::UnitBall(2), g, gp, {1, 1, 200, 0.0},
                    StepsizeSchedule::Harmonic(), Eigen::VectorXd::Zero(2), s);
  EXPECT_LE((run.final_state.row(0).transpose() - V({0.2, -0.3})).norm(), 1e-12);
}

TEST(RunDco, RejectsInfeasibleStart) {
  auto g = PublicGraph::Build(1, {}, 0.5);
  auto gp = PrivateGraph::Build(1, {});
  auto f = ObjectiveFamily::Quadratic({V({0.0, 0.0})});
  Stream s(1, 0, "x");
  try {
    RunDco(f, ConvexSet::UnitBall(2), g, gp, {1, 1, 1, 0.0}, StepsizeSchedule::Harmonic(),
           V({2, 0}), s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasibleStart);
  }
}

TEST(RunDco, CallbackSeesEveryRecursion) {
  auto g = PublicGraph::Cycle(10, 0.1);
  auto gp = ThreePaths();
  std::vector<Eigen::VectorXd> c(10, V({0.1, 0.1}));
  int calls = 0;
  DcoOptions opt;
  opt.on_recursion = [&](int l, const Eigen::MatrixXd& x) {
    EXPECT_EQ(l, ++calls);
    EXPECT_EQ(x.rows(), 10);
  };
  Stream s(2, 0, "cb");
  RunDco(ObjectiveFamily::Quadratic(c), ConvexSet::UnitBall(2), g, gp, {2, 3, 7, 1.0},
         StepsizeSchedule::Harmonic(), V({0, 0}), s, opt);
  EXPECT_EQ(calls, 7);
}

EquationSystem Inconsistent() {
  // Ten agents share three hyperplanes in R^2 that do not meet.
  std::vector<AffineEquation> eqs;
  const Eigen::VectorXd h[3] = {V({1, 0}), V({0, 2}), V({1, 1})};
  const double z[3] = {1.0, 2.0, 3.0};
  for (int i = 0; i < 10; ++i) eqs.emplace_back(h[i % 3], z[i % 3]);
  return EquationSystem(std::move(eqs), EquationSystem::Mode::kLeastSquares);
}

TEST(RunNleLeastSquares, InconsistentSystemReachesNormalizedOptimum) {
  auto sys = Inconsistent();
  // Oracle: weighted normal equations sum_i h_i h_i^T / |h_i|^2 y = sum_i z_i h_i / |h_i|^2.
  Eigen::Matrix2d a = Eigen::Matrix2d::Zero();
  Eigen::Vector2d b = Eigen::Vector2d::Zero();
  for (const auto& eq : sys.equations()) {
    a += eq.h() * eq.h().transpose() / eq.h().squaredNorm();
    b += eq.z() * eq.h() / eq.h().squaredNorm();
  }
  const Eigen::Vector2d oracle = a.ldlt().solve(b);
  EXPECT_LE((NormalizedLeastSquares(sys) - oracle).norm(), 1e-12);

  auto g = PublicGraph::Cycle(10, 0.1);
  auto gp = ThreePaths();
  Stream s(3, 0, "ls");
  auto run = RunNleLeastSquares(sys, g, gp, {1, 400, 300, 0.0}, StepsizeSchedule::Constant(0.5),
                                V({0, 0}), s);
  Eigen::Vector2d mean = run.final_state.colwise().mean().transpose();
  EXPECT_LE((mean - oracle).norm(), 1e-6);
  // Each agent sits at c + alpha (P_k c - c): the spread is alpha^2 sum dist^2.
  double spread = 0.0;
  for (const auto& eq : sys.equations()) spread += (eq.Project(oracle) - oracle).squaredNorm();
  EXPECT_NEAR(run.final_error, 0.25 * spread, 1e-6);
}

TEST(RunNleLeastSquares, UnitStepReproducesRunNleBitwise) {
  auto sys = BenchmarkSystem();
  auto g = PublicGraph::Cycle(10, 0.25);
  auto gp = ThreePaths();
  Stream a(4, 0, "same"), b(4, 0, "same");
  auto exact = RunNle(sys, g, gp, {3, 20, 15, 2.0}, Eigen::VectorXd::Zero(6), a);
  auto relaxed = RunNleLeastSquares(sys, g, gp, {3, 20, 15, 2.0},
                                    StepsizeSchedule::Constant(1.0), Eigen::VectorXd::Zero(6), b);
  EXPECT_TRUE((exact.final_state.array() == relaxed.final_state.array()).all());
  EXPECT_EQ(exact.final_error, relaxed.final_error);
}

TEST(Centralized, ReachesProjectedMean) {
  auto f = ObjectiveFamily::Quadratic({V({2, 0}), V({2, 2})});
  auto y = CentralizedProjectedGradient(f, ConvexSet::UnitBall(2), V({0, 0}), 500, 0.1);
  EXPECT_LE((y - V({2, 1}).normalized()).norm(), 1e-9);
}

TEST(Auc, Examples) {
  const std::vector<double> s{0.1, 0.4, 0.35, 0.8};
  const std::vector<int> b{0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(Auc(s, b), 0.75);
  const std::vector<double> sep{0.1, 0.2, 0.9, 0.95};
  EXPECT_DOUBLE_EQ(Auc(sep, b), 1.0);
  const std::vector<double> tie(4, 0.3);
  EXPECT_DOUBLE_EQ(Auc(tie, b), 0.5);
}

TEST(Auc, MatchesPairCountWithTies) {
  Stream s(26, 0, "auc");
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> scores(40);
    std::vector<int> labels(40);
    for (int i = 0; i < 40; ++i) {
      scores[i] = static_cast<double>(s.UniformIndex(8));  // plenty of ties
      labels[i] = i % 3 == 0 ? 1 : 0;
    }
    EXPECT_NEAR(Auc(scores, labels), PairAuc(scores, labels), 1e-14);
  }
}

TEST(Auc, DegenerateLabels) {
  const std::vector<double> s{0.1, 0.2};
  const std::vector<int> one{1, 1}, bad{0, 2};
  EXPECT_THROW(Auc(s, one), Error);
  EXPECT_THROW(Auc(s, bad), Error);
}

}  // namespace
}  // namespace ppsc
