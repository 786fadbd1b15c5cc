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

#ifndef CSCL_TESTS_FIXTURES_H_
#define CSCL_TESTS_FIXTURES_H_

namespace cscl::testing {

// Five sentences where every error is a confusion pair and every context is
// distinct enough to be memorised.
inline constexpr char kTinyCorpus[] =
    "t1\t他代着帽子\t他戴着帽子\n"
    "t2\t我在来一次\t我再来一次\n"
    "t3\t请带上书本\t请带上书本\n"
    "t4\t他们再家里\t他们在家里\n"
    "t5\t她戴了水果\t她带了水果\n";
inline constexpr char kTinyConfusion[] =
    "带\t代戴\n戴\t带代\n代\t带戴\n在\t再\n再\t在\n";

}  // namespace cscl::testing

#endif  // CSCL_TESTS_FIXTURES_H_
