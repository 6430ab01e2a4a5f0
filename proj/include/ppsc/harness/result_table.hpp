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

#ifndef PPSC_HARNESS_RESULT_TABLE_HPP_
#define PPSC_HARNESS_RESULT_TABLE_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "ppsc/solver_run.hpp"

namespace ppsc::harness {

struct ResultRow {
  std::string params;  // "key=value;key=value", sorted by the emitting experiment
  std::string metric;
  double value = 0.0;
  double std_err = kNotMeasured;
  std::string flag;  // empty, or "forced" when an override broke a planner bound
};

// Rows in emission order; experiments emit in a fixed grid order so the CSV is
// byte-identical for a fixed config and seed.
class ResultTable {
 public:
  static constexpr const char* kHeader = "params,metric,value,std_err,flag";

  void Add(std::string params, std::string metric, double value,
           double std_err = kNotMeasured, std::string flag = {});
  void Append(const ResultTable& other);

  const std::vector<ResultRow>& rows() const { return rows_; }
  /// First row matching params and metric; throws kInvalidArgument if absent.
  const ResultRow& Find(const std::string& params, const std::string& metric) const;

  void WriteCsv(std::ostream& out) const;
  std::string ToCsv() const;

 private:
  std::vector<ResultRow> rows_;
};

/// Shortest round-trip decimal for value ("nan" for unmeasured).
std::string FormatNumber(double value);

}  // namespace ppsc::harness

#endif  // PPSC_HARNESS_RESULT_TABLE_HPP_
