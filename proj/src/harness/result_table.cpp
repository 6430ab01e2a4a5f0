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

#include "ppsc/harness/result_table.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "ppsc/errors.hpp"

namespace ppsc::harness {

std::string FormatNumber(double value) {
  if (std::isnan(value)) return "nan";
  return fmt::format("{}", value);
}

void ResultTable::Add(std::string params, std::string metric, double value, double std_err,
                      std::string flag) {
  rows_.push_back({std::move(params), std::move(metric), value, std_err, std::move(flag)});
}

void ResultTable::Append(const ResultTable& other) {
  rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
}

const ResultRow& ResultTable::Find(const std::string& params, const std::string& metric) const {
  for (const auto& r : rows_) {
    if (r.params == params && r.metric == metric) return r;
  }
  throw Error(ErrorKind::kInvalidArgument, "no row " + params + " / " + metric);
}

void ResultTable::WriteCsv(std::ostream& out) const {
  out << kHeader << '\n';
  for (const auto& r : rows_) {
    out << r.params << ',' << r.metric << ',' << FormatNumber(r.value) << ','
        << FormatNumber(r.std_err) << ',' << r.flag << '\n';
  }
}

std::string ResultTable::ToCsv() const {
  std::ostringstream out;
  WriteCsv(out);
  return out.str();
}

}  // namespace ppsc::harness
