#pragma once

#include <cstddef>
#include <functional>

namespace starmetric {

/// Worker cap for internal parallel loops. Reads STARMETRIC_THREADS once;
/// unset or invalid falls back to the hardware concurrency.
std::size_t thread_cap();

/// Splits [0, n) into contiguous chunks and runs body(begin, end) on each,
/// possibly from worker threads. body must be safe to run concurrently on
/// disjoint ranges. Runs inline when n is small or the cap is 1.
void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace starmetric
