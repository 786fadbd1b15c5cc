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

#ifndef CSCL_SRC_PARALLEL_H_
#define CSCL_SRC_PARALLEL_H_

#include <cstddef>
#include <cstdint>
#include <exception>
#include <vector>

namespace cscl::internal {

// Runs fn(i) for i in [0, n) on the OpenMP team. An exception thrown by any
// iteration is rethrown on the calling thread once the loop finishes; when
// several iterations throw, the one with the smallest index wins so that the
// reported error does not depend on scheduling.
template <typename Fn>
void ParallelFor(std::size_t n, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  bool any_error = false;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 16) reduction(|| : any_error)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
      any_error = true;
    }
  }
  if (!any_error) return;
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
}

}  // namespace cscl::internal

#endif  // CSCL_SRC_PARALLEL_H_
