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

#include "ppsc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "ppsc/errors.hpp"

namespace ppsc {
namespace {

class DisjointSet {
 public:
  explicit DisjointSet(int n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int Find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void Union(int a, int b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
};

// Normalizes to (min, max), rejects self loops, out-of-range and duplicates.
std::vector<Edge> CanonicalEdges(int n, std::span<const Edge> edges) {
  if (n < 1) throw Error(ErrorKind::kInvalidGraph, "node count must be >= 1");
  std::set<Edge> seen;
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (auto [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw Error(ErrorKind::kInvalidGraph,
                  "edge (" + std::to_string(i) + "," + std::to_string(j) +
                      ") out of range for n=" + std::to_string(n));
    }
    if (i == j) {
      throw Error(ErrorKind::kInvalidGraph,
                  "self loop at node " + std::to_string(i));
    }
    Edge e{std::min(i, j), std::max(i, j)};
    if (!seen.insert(e).second) {
      throw Error(ErrorKind::kInvalidGraph,
                  "duplicate edge (" + std::to_string(e.first) + "," +
                      std::to_string(e.second) + ")");
    }
    out.push_back(e);
  }
  return out;
}

std::vector<std::vector<int>> Neighbors(int n, const std::vector<Edge>& edges) {
  std::vector<std::vector<int>> nb(n);
  for (auto [i, j] : edges) {
    nb[i].push_back(j);
    nb[j].push_back(i);
  }
  for (auto& list : nb) std::sort(list.begin(), list.end());
  return nb;
}

}  // namespace

PublicGraph PublicGraph::Build(int n, std::span<const Edge> edges, double weight) {
  if (!(weight > 0.0)) {
    throw Error(ErrorKind::kNonPositiveWeight,
                "public edge weight must be positive, got " + std::to_string(weight));
  }
  PublicGraph g;
  g.n_ = n;
  g.weight_ = weight;
  g.edges_ = CanonicalEdges(n, edges);
  g.neighbors_ = Neighbors(n, g.edges_);

  DisjointSet ds(n);
  for (auto [i, j] : g.edges_) ds.Union(i, j);
  for (int i = 1; i < n; ++i) {
    if (ds.Find(i) != ds.Find(0)) {
      throw Error(ErrorKind::kDisconnectedPublicGraph,
                  "node " + std::to_string(i) + " is not reachable from node 0");
    }
  }

  g.laplacian_ = Eigen::MatrixXd::Zero(n, n);
  for (auto [i, j] : g.edges_) {
    g.laplacian_(i, j) -= weight;
    g.laplacian_(j, i) -= weight;
    g.laplacian_(i, i) += weight;
    g.laplacian_(j, j) += weight;
  }

  if (n == 1) {
    g.lambda_g_ = 1.0;
    g.contraction_radius_ = 0.0;
    return g;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.laplacian_,
                                                     Eigen::EigenvaluesOnly);
  g.lambda_g_ = eig.eigenvalues()[1];

  const Eigen::MatrixXd consensus_map =
      Eigen::MatrixXd::Identity(n, n) - g.laplacian_ -
      Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_map(consensus_map,
                                                         Eigen::EigenvaluesOnly);
  g.contraction_radius_ = eig_map.eigenvalues().cwiseAbs().maxCoeff();
  if (!(g.contraction_radius_ < 1.0)) {
    throw Error(ErrorKind::kUnstableWeight,
                "spectral radius of I - A - 11^T/n is " +
                    std::to_string(g.contraction_radius_) + " >= 1 for weight " +
                    std::to_string(weight));
  }
  return g;
}

PublicGraph PublicGraph::Cycle(int n, double weight) {
  std::vector<Edge> edges;
  if (n == 2) {
    edges.emplace_back(0, 1);
  } else if (n > 2) {
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  }
  return Build(n, edges, weight);
}

PrivateGraph PrivateGraph::Build(int n, std::span<const Edge> edges) {
  PrivateGraph g;
  g.n_ = n;
  g.edges_ = CanonicalEdges(n, edges);
  g.neighbors_ = Neighbors(n, g.edges_);
  if (n > 1) {
    for (int i = 0; i < n; ++i) {
      if (g.neighbors_[i].empty()) {
        throw Error(ErrorKind::kIsolatedNode,
                    "node " + std::to_string(i) + " has no private neighbor");
      }
    }
  }

  DisjointSet ds(n);
  for (auto [i, j] : g.edges_) ds.Union(i, j);
  g.component_of_.assign(n, -1);
  std::vector<int> root_to_component(n, -1);
  for (int i = 0; i < n; ++i) {
    const int root = ds.Find(i);
    if (root_to_component[root] < 0) {
      root_to_component[root] = static_cast<int>(g.components_.size());
      g.components_.emplace_back();
    }
    g.component_of_[i] = root_to_component[root];
    g.components_[g.component_of_[i]].push_back(i);
  }

  g.n_max_ = 0;
  g.r_dagger_ = 1.0;
  for (const auto& comp : g.components_) {
    g.n_max_ = std::max(g.n_max_, static_cast<int>(comp.size()));
    int r_min = n;
    int r_max = 0;
    for (int v : comp) {
      r_min = std::min(r_min, g.degree(v));
      r_max = std::max(r_max, g.degree(v));
    }
    if (r_max > 0) {
      g.r_dagger_ = std::min(g.r_dagger_, static_cast<double>(r_min) / r_max);
    }
  }
  return g;
}

int PrivateGraph::oriented_edge_count(int k) const {
  int count = 0;
  for (int v : components_[k]) count += degree(v);
  return count;
}

}  // namespace ppsc
