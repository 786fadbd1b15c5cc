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

#ifndef CSCL_ERROR_H_
#define CSCL_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace cscl {

enum class ErrorCode {
  kLengthMismatch,
  kDuplicateId,
  kMalformedLine,
  kDimMismatch,
  kMissingPosition,
  kMissingEmbedding,
  kShapeMismatch,
  kZeroNormVector,
  kKTooLarge,
  kEmptyInput,
  kMalformedManifest,
  kUnknownSampleId,
  kIdMismatch,
  kMalformedModel,
  kMissingProvider,
  kInvalidArgument,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// True for errors caused by how the tool was invoked rather than by the data
// it was given. The CLI maps these to exit code 2.
bool IsUsageError(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cscl

#endif  // CSCL_ERROR_H_
