#pragma once

#include <cstddef>
#include <functional>

namespace multispec {

/// Worker count from MULTISPEC_THREADS (unset or 0 means hardware
/// concurrency), at least 1.
int configured_threads();

/// Runs body(0..count-1) on up to `threads` workers (<= 0 uses
/// configured_threads()). Each index runs exactly once; the first exception
/// thrown is rethrown after all workers stop.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace multispec
