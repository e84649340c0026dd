#pragma once

#include <cstddef>
#include <functional>

namespace soliton {

/// Worker cap from SOLITON_LAB_THREADS, else the hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Results
/// must be written to per-index slots; the first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace soliton
