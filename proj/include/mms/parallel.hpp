#pragma once

#include <cstdint>
#include <functional>

namespace mms {

/// Number of worker threads used by parallel_for. Defaults to the hardware
/// count; override with the MMS_THREADS environment variable.
int max_threads();

/// Runs body(lo, hi) over a static partition of [0, n). Each index is owned
/// by exactly one chunk, so kernels that write disjoint outputs per index are
/// bitwise deterministic for any thread count.
void parallel_for(int64_t n, const std::function<void(int64_t, int64_t)>& body);

}  // namespace mms
