#pragma once

#include <cstdint>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sdr {

// Execution policy for the data-parallel kernels. `serial` is the plain-loop
// reference path kept for testing; `parallel` uses OpenMP when available.
// Both paths produce bit-identical results: parallel iterations write only
// their own output slots and reductions are merged in a fixed order afterwards.
enum class Exec { serial, parallel };

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Runs body(i) for i in [0, n). Exceptions thrown by parallel iterations are
// captured and re-thrown after the loop joins.
template <typename Body>
void for_each_index(Exec exec, std::int64_t n, Body&& body) {
  if (exec == Exec::serial || n <= 1 || max_threads() <= 1) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(sdr_for_each_index_error)
#endif
      {
        if (!error) error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace sdr
