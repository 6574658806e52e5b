#pragma once

#include <cstddef>
#include <functional>

namespace favfa {

/// Worker cap from FAVFA_THREADS (default: hardware concurrency, min 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, n). Work is split into contiguous chunks, so
/// callers that write to slot i only get results independent of the
/// thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace favfa
