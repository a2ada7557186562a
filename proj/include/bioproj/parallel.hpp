#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>

#include <omp.h>

namespace bioproj {

/// Execution policy for the data-parallel kernels. `serial` is the reference
/// path the tests compare the OpenMP path against; both must produce
/// bit-identical results.
enum class Exec { serial, parallel };

/// Run body(i) for i in [0, count). Iterations must be independent and write
/// only to slots owned by i.
template <typename Body>
void for_each_index(std::size_t count, Exec exec, Body&& body, int workers = 0) {
  if (exec == Exec::serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  const auto n = static_cast<std::int64_t>(count);
  // Exceptions may not cross the parallel region; rethrow the first one after.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(bioproj_for_each_index)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace bioproj
