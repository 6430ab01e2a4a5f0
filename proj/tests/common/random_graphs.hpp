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

#ifndef PPSC_TESTS_RANDOM_GRAPHS_HPP_
#define PPSC_TESTS_RANDOM_GRAPHS_HPP_

#include <vector>

#include "ppsc/graph.hpp"
#include "ppsc/random.hpp"

namespace ppsc::fixtures {

// Private graph on n >= 2 nodes cut into blocks of 2..5 nodes; each block is a
// path, sometimes closed into a cycle. A trailing single node joins the
// previous block.
inline PrivateGraph RandomPrivate(int n, Stream& s) {
  std::vector<Edge> e;
  int start = 0;
  while (start < n) {
    int len = 2 + static_cast<int>(s.UniformIndex(4));
    if (start + len > n) len = n - start;
    if (len == 1) {
      e.emplace_back(start - 1, start);
      break;
    }
    for (int i = start; i + 1 < start + len; ++i) e.emplace_back(i, i + 1);
    if (len >= 3 && s.UniformIndex(2) == 0) e.emplace_back(start, start + len - 1);
    start += len;
  }
  return PrivateGraph::Build(n, e);
}

inline std::vector<Edge> Path(int first, int count) {
  std::vector<Edge> e;
  for (int i = first; i + 1 < first + count; ++i) e.emplace_back(i, i + 1);
  return e;
}

inline std::vector<Edge> Cycle(int first, int count) {
  auto e = Path(first, count);
  if (count >= 3) e.emplace_back(first + count - 1, first);
  return e;
}

inline std::vector<Edge> Join(std::initializer_list<std::vector<Edge>> parts) {
  std::vector<Edge> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace ppsc::fixtures

#endif  // PPSC_TESTS_RANDOM_GRAPHS_HPP_
