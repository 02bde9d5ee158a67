#include "mms/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>

namespace mms {

int max_threads() {
  static const int n = [] {
    if (const char* env = std::getenv("MMS_THREADS")) {
      int v = std::atoi(env);
      if (v > 0) return v;
    }
    return omp_get_max_threads();
  }();
  return n;
}

void parallel_for(int64_t n, const std::function<void(int64_t, int64_t)>& body) {
  if (n <= 0) return;
  const int threads = static_cast<int>(std::min<int64_t>(max_threads(), n));
  if (threads <= 1 || omp_in_parallel()) {
    body(0, n);
    return;
  }
  const int64_t chunk = (n + threads - 1) / threads;
#pragma omp parallel for schedule(static, 1) num_threads(threads)
  for (int t = 0; t < threads; ++t) {
    const int64_t lo = t * chunk;
    const int64_t hi = std::min<int64_t>(lo + chunk, n);
    if (lo < hi) body(lo, hi);
  }
}

}  // namespace mms
