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

#include "ppsc/errors.hpp"

namespace ppsc {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kDisconnectedPublicGraph: return "DisconnectedPublicGraph";
    case ErrorKind::kNonPositiveWeight: return "NonPositiveWeight";
    case ErrorKind::kUnstableWeight: return "UnstableWeight";
    case ErrorKind::kInvalidGraph: return "InvalidGraph";
    case ErrorKind::kIsolatedNode: return "IsolatedNode";
    case ErrorKind::kDeltaOutOfRange: return "DeltaOutOfRange";
    case ErrorKind::kNonPositiveEpsilon: return "NonPositiveEpsilon";
    case ErrorKind::kNegativeSigma: return "NegativeSigma";
    case ErrorKind::kMalformedTranscript: return "MalformedTranscript";
    case ErrorKind::kEnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorKind::kZeroLambdaPpsc: return "ZeroLambdaPpsc";
    case ErrorKind::kRankDeficient: return "RankDeficient";
    case ErrorKind::kInconsistent: return "Inconsistent";
    case ErrorKind::kDeltaSharpNonPositive: return "DeltaSharpNonPositive";
    case ErrorKind::kUnboundedGradient: return "UnboundedGradient";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kStructureMismatch: return "StructureMismatch";
    case ErrorKind::kInfeasibleStart: return "InfeasibleStart";
    case ErrorKind::kDegenerateLabels: return "DegenerateLabels";
    case ErrorKind::kBadMagic: return "BadMagic";
    case ErrorKind::kTruncatedFile: return "TruncatedFile";
    case ErrorKind::kCountMismatch: return "CountMismatch";
    case ErrorKind::kConfig: return "ConfigError";
    case ErrorKind::kBoundViolation: return "BoundViolation";
  }
  return "Unknown";
}

}  // namespace ppsc
