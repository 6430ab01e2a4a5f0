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

#ifndef PPSC_HARNESS_DATASETS_HPP_
#define PPSC_HARNESS_DATASETS_HPP_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ppsc/optim.hpp"
#include "ppsc/random.hpp"

namespace ppsc::harness {

// Labelled samples for binary classification; labels are 0 or 1.
struct LabelledData {
  Eigen::MatrixXd features;  // samples x m
  std::vector<int> labels;

  Eigen::Index size() const { return features.rows(); }
};

/// Two isotropic unit-variance Gaussian blobs centred at +/- (separation / 2)
/// along a random unit direction, equal class sizes up to one sample.
LabelledData SyntheticBlobs(int samples, int features, double separation, Stream& stream);

/// CSV rows "x_1,...,x_m,label"; a header line whose first field is not numeric
/// is skipped. Throws kConfig on ragged rows or labels outside {0, 1}.
LabelledData LoadCsvDataset(const std::string& path);

/// IDX pair (images 0x00000803, labels 0x00000801). Pixels scaled by 1/255;
/// label 1 iff the digit is in positive_digits. limit < 0 keeps every sample.
/// Throws kBadMagic, kTruncatedFile or kCountMismatch.
LabelledData LoadMnistIdx(const std::string& images_path, const std::string& labels_path,
                          const std::vector<int>& positive_digits, int limit = -1);

/// Raw IDX contents, exposed for round-trip tests.
struct IdxImages {
  int count = 0, rows = 0, cols = 0;
  std::vector<unsigned char> pixels;
};
IdxImages ReadIdxImages(const std::string& path);
std::vector<unsigned char> ReadIdxLabels(const std::string& path);

/// Deals samples round-robin to n agents.
std::vector<LogisticTerm> SplitAmongAgents(const LabelledData& data, int n);

}  // namespace ppsc::harness

#endif  // PPSC_HARNESS_DATASETS_HPP_
