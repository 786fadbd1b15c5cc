// Copyright 2026 The cscl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cscl/error.h"

namespace cscl {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kLengthMismatch:
      return "LengthMismatch";
    case ErrorCode::kDuplicateId:
      return "DuplicateId";
    case ErrorCode::kMalformedLine:
      return "MalformedLine";
    case ErrorCode::kDimMismatch:
      return "DimMismatch";
    case ErrorCode::kMissingPosition:
      return "MissingPosition";
    case ErrorCode::kMissingEmbedding:
      return "MissingEmbedding";
    case ErrorCode::kShapeMismatch:
      return "ShapeMismatch";
    case ErrorCode::kZeroNormVector:
      return "ZeroNormVector";
    case ErrorCode::kKTooLarge:
      return "KTooLarge";
    case ErrorCode::kEmptyInput:
      return "EmptyInput";
    case ErrorCode::kMalformedManifest:
      return "MalformedManifest";
    case ErrorCode::kUnknownSampleId:
      return "UnknownSampleId";
    case ErrorCode::kIdMismatch:
      return "IdMismatch";
    case ErrorCode::kMalformedModel:
      return "MalformedModel";
    case ErrorCode::kMissingProvider:
      return "MissingProvider";
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kIo:
      return "Io";
  }
  return "Unknown";
}

bool IsUsageError(ErrorCode code) {
  switch (code) {
    case ErrorCode::kKTooLarge:
    case ErrorCode::kEmptyInput:
    case ErrorCode::kIdMismatch:
    case ErrorCode::kMissingProvider:
    case ErrorCode::kInvalidArgument:
      return true;
    default:
      return false;
  }
}

}  // namespace cscl
