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

#ifndef CSCL_TEXT_H_
#define CSCL_TEXT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cscl::utf8 {

// Decodes UTF-8 into Unicode scalar values. Returns nullopt on overlong
// forms, surrogates, truncated sequences and values above U+10FFFF.
std::optional<std::u32string> Decode(std::string_view bytes);

void Append(char32_t c, std::string* out);
std::string Encode(std::u32string_view text);
std::string Encode(char32_t c);

}  // namespace cscl::utf8

namespace cscl {

// Splits on a single byte separator. Empty fields are kept.
std::vector<std::string_view> Split(std::string_view text, char sep);

// Splits a document into LF-terminated lines, dropping one trailing CR per
// line. A final line without a terminator is still returned.
std::vector<std::string_view> SplitLines(std::string_view text);

}  // namespace cscl

#endif  // CSCL_TEXT_H_
