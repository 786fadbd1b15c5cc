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

#ifndef CSCL_IO_H_
#define CSCL_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace cscl {

// A missing or unreadable input is a configuration problem, so this throws
// Error(kInvalidArgument).
std::string ReadFile(const std::filesystem::path& path);

// Creates parent directories. Throws Error(kIo) on failure.
void WriteFile(const std::filesystem::path& path, std::string_view content);

}  // namespace cscl

#endif  // CSCL_IO_H_
