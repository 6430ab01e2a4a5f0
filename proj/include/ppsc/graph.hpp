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

#ifndef PPSC_GRAPH_HPP_
#define PPSC_GRAPH_HPP_

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace ppsc {

using Edge = std::pair<int, int>;

// Weighted, connected public communication graph G. Every edge carries the
// same weight a; the Laplacian is A = a (D - Adj). Nodes are 0-based.
class PublicGraph {
 public:
  /// Validates connectivity and the contraction of I - A on the disagreement
  /// subspace. Throws kNonPositiveWeight, kDisconnectedPublicGraph,
  /// kUnstableWeight or kInvalidGraph.
  static PublicGraph Build(int n, std::span<const Edge> edges, double weight);

  /// Cycle 0-1-...-(n-1)-0.
  static PublicGraph Cycle(int n, double weight);

  int n() const { return n_; }
  double weight() const { return weight_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::vector<int>>& neighbors() const { return neighbors_; }
  const Eigen::MatrixXd& laplacian() const { return laplacian_; }

  /// Second-smallest Laplacian eigenvalue. A single node has no disagreement
  /// subspace; lambda_g is reported as 1 there (exact consensus in 0 steps).
  double lambda_g() const { return lambda_g_; }

  /// Spectral radius of I - A - (1/n) 11^T.
  double contraction_radius() const { return contraction_radius_; }

  /// True when a > 1/n: accepted because the contraction check passed, but
  /// outside the default weight range.
  bool weight_above_default() const { return weight_ > 1.0 / n_; }

 private:
  int n_ = 0;
  double weight_ = 0.0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> neighbors_;
  Eigen::MatrixXd laplacian_;
  double lambda_g_ = 0.0;
  double contraction_radius_ = 0.0;
};

// Private graph G_p over the same node set; may have several components.
class PrivateGraph {
 public:
  /// Throws kIsolatedNode when some node has no private neighbor. A single
  /// node graph (n == 1) is accepted as the trivial one-agent network.
  static PrivateGraph Build(int n, std::span<const Edge> edges);

  int n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::vector<int>>& neighbors() const { return neighbors_; }
  int degree(int node) const { return static_cast<int>(neighbors_[node].size()); }

  /// Components sorted by their smallest node; nodes sorted within each.
  const std::vector<std::vector<int>>& components() const { return components_; }
  int component_of(int node) const { return component_of_[node]; }
  int q() const { return static_cast<int>(components_.size()); }
  int n_max() const { return n_max_; }

  /// min over components of r_min / r_max.
  double r_dagger() const { return r_dagger_; }

  /// Number of oriented (sender, receiver) pairs available in component k.
  int oriented_edge_count(int k) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<std::vector<int>> components_;
  std::vector<int> component_of_;
  int n_max_ = 0;
  double r_dagger_ = 1.0;
};

}  // namespace ppsc

#endif  // PPSC_GRAPH_HPP_
