// Copyright 2026 The kbgeo Authors
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

#ifndef KBGEO_SRC_PARALLEL_H_
#define KBGEO_SRC_PARALLEL_H_

#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>

namespace kbgeo::internal {

// OpenMP loop over [0, n) that is safe for throwing bodies: the exception of
// the lowest failing index is rethrown after the loop, so the outcome does
// not depend on thread scheduling.
template <typename Fn>
void ParallelFor(std::size_t n, Fn fn) {
  std::exception_ptr error;
  std::size_t error_index = std::numeric_limits<std::size_t>::max();
  const auto sn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < sn; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(kbgeo_parallel_for_error)
      {
        if (static_cast<std::size_t>(i) < error_index) {
          error_index = static_cast<std::size_t>(i);
          error = std::current_exception();
        }
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace kbgeo::internal

#endif  // KBGEO_SRC_PARALLEL_H_
