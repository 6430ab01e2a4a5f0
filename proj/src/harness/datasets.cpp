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

#include "ppsc/harness/datasets.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "ppsc/errors.hpp"

namespace ppsc::harness {

LabelledData SyntheticBlobs(int samples, int features, double separation, Stream& stream) {
  if (samples < 2 || features < 1) {
    throw Error(ErrorKind::kInvalidArgument, "need >= 2 samples and >= 1 feature");
  }
  Eigen::VectorXd dir = stream.Gaussian(features, 1.0);
  dir /= dir.norm();
  LabelledData data;
  data.features.resize(samples, features);
  data.labels.resize(samples);
  for (int j = 0; j < samples; ++j) {
    const int label = j % 2;
    const double side = label == 1 ? 0.5 : -0.5;
    data.features.row(j) = (side * separation * dir + stream.Gaussian(features, 1.0)).transpose();
    data.labels[j] = label;
  }
  return data;
}

LabelledData LoadCsvDataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfig, "cannot open dataset " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<double> values;
    std::stringstream ls(line);
    std::string field;
    bool numeric = true;
    while (std::getline(ls, field, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(field, &used));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (line_no == 1) continue;
      throw Error(ErrorKind::kConfig, fmt::format("{}:{}: not a number", path, line_no));
    }
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw Error(ErrorKind::kConfig, fmt::format("{}:{}: ragged row", path, line_no));
    }
    if (values.size() < 2) {
      throw Error(ErrorKind::kConfig, fmt::format("{}:{}: need features and a label", path, line_no));
    }
    const double label = values.back();
    if (label != 0.0 && label != 1.0) {
      throw Error(ErrorKind::kConfig, fmt::format("{}:{}: label must be 0 or 1", path, line_no));
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw Error(ErrorKind::kConfig, "dataset " + path + " is empty");
  LabelledData data;
  const auto m = static_cast<Eigen::Index>(rows.front().size() - 1);
  data.features.resize(static_cast<Eigen::Index>(rows.size()), m);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (Eigen::Index k = 0; k < m; ++k) data.features(static_cast<Eigen::Index>(i), k) = rows[i][k];
    data.labels.push_back(static_cast<int>(rows[i].back()));
  }
  return data;
}

namespace {

std::uint32_t ReadBigEndian(std::istream& in, const std::string& path) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) {
    throw Error(ErrorKind::kTruncatedFile, path + ": header ends early");
  }
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
         (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

std::ifstream OpenBinary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kConfig, "cannot open " + path);
  return in;
}

}  // namespace

IdxImages ReadIdxImages(const std::string& path) {
  std::ifstream in = OpenBinary(path);
  const std::uint32_t magic = ReadBigEndian(in, path);
  if (magic != 0x00000803u) {
    throw Error(ErrorKind::kBadMagic, fmt::format("{}: magic {:#010x}, expected 0x00000803", path, magic));
  }
  IdxImages img;
  img.count = static_cast<int>(ReadBigEndian(in, path));
  img.rows = static_cast<int>(ReadBigEndian(in, path));
  img.cols = static_cast<int>(ReadBigEndian(in, path));
  img.pixels.resize(static_cast<std::size_t>(img.count) * img.rows * img.cols);
  if (!in.read(reinterpret_cast<char*>(img.pixels.data()),
               static_cast<std::streamsize>(img.pixels.size()))) {
    throw Error(ErrorKind::kTruncatedFile, path + ": fewer pixels than the header declares");
  }
  return img;
}

std::vector<unsigned char> ReadIdxLabels(const std::string& path) {
  std::ifstream in = OpenBinary(path);
  const std::uint32_t magic = ReadBigEndian(in, path);
  if (magic != 0x00000801u) {
    throw Error(ErrorKind::kBadMagic, fmt::format("{}: magic {:#010x}, expected 0x00000801", path, magic));
  }
  std::vector<unsigned char> labels(ReadBigEndian(in, path));
  if (!in.read(reinterpret_cast<char*>(labels.data()), static_cast<std::streamsize>(labels.size()))) {
    throw Error(ErrorKind::kTruncatedFile, path + ": fewer labels than the header declares");
  }
  return labels;
}

LabelledData LoadMnistIdx(const std::string& images_path, const std::string& labels_path,
                          const std::vector<int>& positive_digits, int limit) {
  const IdxImages img = ReadIdxImages(images_path);
  const std::vector<unsigned char> labels = ReadIdxLabels(labels_path);
  if (static_cast<std::size_t>(img.count) != labels.size()) {
    throw Error(ErrorKind::kCountMismatch, fmt::format("{} images but {} labels", img.count,
                                                       labels.size()));
  }
  const int keep = limit < 0 ? img.count : std::min(limit, img.count);
  const int dim = img.rows * img.cols;
  LabelledData data;
  data.features.resize(keep, dim);
  data.labels.resize(keep);
  for (int i = 0; i < keep; ++i) {
    for (int k = 0; k < dim; ++k) {
      data.features(i, k) = img.pixels[static_cast<std::size_t>(i) * dim + k] / 255.0;
    }
    const int digit = labels[i];
    data.labels[i] = std::find(positive_digits.begin(), positive_digits.end(), digit) !=
                             positive_digits.end()
                         ? 1
                         : 0;
  }
  return data;
}

std::vector<LogisticTerm> SplitAmongAgents(const LabelledData& data, int n) {
  if (n < 1 || data.size() < n) {
    throw Error(ErrorKind::kInvalidArgument, "need at least one sample per agent");
  }
  std::vector<std::vector<Eigen::Index>> owned(n);
  for (Eigen::Index j = 0; j < data.size(); ++j) owned[j % n].push_back(j);
  std::vector<LogisticTerm> terms(n);
  for (int i = 0; i < n; ++i) {
    const auto rows = static_cast<Eigen::Index>(owned[i].size());
    terms[i].features.resize(rows, data.features.cols());
    terms[i].labels.resize(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
      terms[i].features.row(r) = data.features.row(owned[i][r]);
      terms[i].labels[r] = data.labels[owned[i][r]];
    }
  }
  return terms;
}

}  // namespace ppsc::harness
