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

#ifndef PPSC_LINEAR_EQ_HPP_
#define PPSC_LINEAR_EQ_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ppsc/graph.hpp"
#include "ppsc/random.hpp"
#include "ppsc/solver_run.hpp"

namespace ppsc {

// One agent's hyperplane {y : h^T y = z}.
class AffineEquation {
 public:
  /// Throws kInvalidArgument if h is zero.
  AffineEquation(Eigen::VectorXd h, double z);

  const Eigen::VectorXd& h() const { return h_; }
  double z() const { return z_; }
  Eigen::Index dim() const { return h_.size(); }

  /// h h^T / (h^T h): projector onto span(h).
  Eigen::MatrixXd NormalProjector() const;
  /// I - h h^T / (h^T h).
  Eigen::MatrixXd Projector() const;
  /// z h / (h^T h).
  Eigen::VectorXd Translation() const;

  /// Orthogonal projection of x onto the hyperplane.
  Eigen::VectorXd Project(const Eigen::VectorXd& x) const;

 private:
  Eigen::VectorXd h_;
  double z_;
  double h_norm_sq_;
};

/// Spectral norm of the difference of the two normal projectors.
double RotationalDistance(const AffineEquation& a, const AffineEquation& b);

/// Euclidean distance between the translation vectors.
double TranslationalDistance(const AffineEquation& a, const AffineEquation& b);

class EquationSystem;

/// True iff rotational + translational distance <= mu for every agent.
/// Throws kDimensionMismatch when node counts or dimensions differ.
bool MuAdjacent(const EquationSystem& a, const EquationSystem& b, double mu);

/// Largest singular value of I - (1/n) sum_i h_i h_i^T / (h_i^T h_i).
/// Throws kRankDeficient when the stacked H has rank < m.
double LambdaH(const std::vector<AffineEquation>& equations);

// Stacked system H y = z with one row per agent. rank(H) = m is required.
class EquationSystem {
 public:
  enum class Mode {
    kExact,         // z in span(H); y_star solves H y = z
    kLeastSquares,  // y_star is the least-squares solution
  };

  /// Throws kRankDeficient, kDimensionMismatch, and (kExact only)
  /// kInconsistent when ||H y_ls - z|| > 1e-8 ||z||.
  EquationSystem(std::vector<AffineEquation> equations, Mode mode = Mode::kExact);

  /// Parses "m coefficients then z" per line; '#' comments and blanks ignored.
  static EquationSystem Parse(std::istream& in, Mode mode = Mode::kExact);
  static EquationSystem Load(const std::string& path, Mode mode = Mode::kExact);

  const std::vector<AffineEquation>& equations() const { return equations_; }
  int n() const { return static_cast<int>(equations_.size()); }
  Eigen::Index m() const { return h_.cols(); }
  const Eigen::MatrixXd& h() const { return h_; }
  const Eigen::VectorXd& z() const { return z_; }
  const Eigen::VectorXd& y_star() const { return y_star_; }
  double lambda_h() const { return lambda_h_; }
  Mode mode() const { return mode_; }

  /// Block-diagonal diag(h_i h_i^T / h_i^T h_i), nm x nm.
  Eigen::MatrixXd BlockProjector() const;
  /// Stacked translations, length nm.
  Eigen::VectorXd BlockOffset() const;

 private:
  std::vector<AffineEquation> equations_;
  Eigen::MatrixXd h_;
  Eigen::VectorXd z_;
  Eigen::VectorXd y_star_;
  double lambda_h_ = 0.0;
  Mode mode_;
};

/// The ten-agent, six-unknown benchmark system with solution
/// [5, -10, 10, -5, 1, 5].
EquationSystem BenchmarkSystem();

struct NlePlan {
  int steps = 1;       // S
  int averaging = 1;   // T
  int recursions = 1;  // L
  double sigma_gamma = 0.0;
};

/// L recursions of [S PPSC steps over gp, T averaging steps over g, one
/// projection step]. Initial states are the projections of zeta0. Records per
/// recursion the error to 1 (x) y_star and the consensus residual norm.
SolverRun RunNle(const EquationSystem& sys, const PublicGraph& g,
                 const PrivateGraph& gp, const NlePlan& plan,
                 const Eigen::VectorXd& zeta0, Stream& stream);

}  // namespace ppsc

#endif  // PPSC_LINEAR_EQ_HPP_
