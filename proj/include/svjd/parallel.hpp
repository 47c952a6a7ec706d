#pragma once

#include <cstddef>
#include <exception>

namespace svjd {

/// Execution policy for data-parallel kernels. Serial is the reference
/// implementation; both produce identical per-item results.
enum class Exec { serial, parallel };

/// Calls f(i) for i in [0, n). Under Exec::parallel the loop is an OpenMP
/// static schedule; the first exception thrown by any item is rethrown.
template <class F>
void for_each_index(std::size_t n, Exec exec, F&& f) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::exception_ptr err;
  const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < count; ++i) {
    try {
      f(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(svjd_for_each_index)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace svjd
