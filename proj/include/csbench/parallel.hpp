// Copyright 2026 The csbench authors
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <initializer_list>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace csbench {

// Resolves a user-facing thread request: 0 picks the OpenMP default,
// anything else is used as given.  Without OpenMP everything is serial.
inline int resolve_threads(int requested) {
#ifdef _OPENMP
  if (requested <= 0) return omp_get_max_threads();
  return requested;
#else
  (void)requested;
  return 1;
#endif
}

// Runs fn(0..n-1).  threads == 1 is the serial reference path; any other
// value dispatches to the OpenMP kernel.  Callers must make fn(i)
// order-independent (each task derives its own RNG seed), so both paths
// produce bit-identical results.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t)> &fn) {
  int nt = resolve_threads(threads);
  if (nt == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
#ifdef _OPENMP
  std::exception_ptr error;
#pragma omp parallel for num_threads(nt) schedule(dynamic)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
#else
  for (std::size_t i = 0; i < n; ++i) fn(i);
#endif
}

// splitmix64 step; used to derive statistically independent per-task seeds
// from a master seed and a task path, keeping runs reproducible under any
// thread count.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64(master ^ 0x243f6a8885a308d3ULL);
  for (std::uint64_t p : path) s = splitmix64(s ^ splitmix64(p));
  return s;
}

}  // namespace csbench
