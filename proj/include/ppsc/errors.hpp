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

#ifndef PPSC_ERRORS_HPP_
#define PPSC_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ppsc {

enum class ErrorKind {
  kInvalidArgument,
  kDisconnectedPublicGraph,
  kNonPositiveWeight,
  kUnstableWeight,
  kInvalidGraph,
  kIsolatedNode,
  kDeltaOutOfRange,
  kNonPositiveEpsilon,
  kNegativeSigma,
  kMalformedTranscript,
  kEnumerationTooLarge,
  kZeroLambdaPpsc,
  kRankDeficient,
  kInconsistent,
  kDeltaSharpNonPositive,
  kUnboundedGradient,
  kDimensionMismatch,
  kStructureMismatch,
  kInfeasibleStart,
  kDegenerateLabels,
  kBadMagic,
  kTruncatedFile,
  kCountMismatch,
  kConfig,
  kBoundViolation,
};

std::string_view ErrorKindName(ErrorKind kind);

// All precondition and validation failures raised by the library. Callers that
// need to distinguish causes switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ppsc

#endif  // PPSC_ERRORS_HPP_
