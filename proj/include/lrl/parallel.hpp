#pragma once

#include <cstddef>
#include <functional>

namespace lrl {

/// Number of worker threads used by library calls. Defaults to the
/// LRL_THREADS environment variable, else hardware concurrency.
unsigned worker_count();

/// Caps the worker pool; 0 restores the default.
void set_worker_count(unsigned n);

/// Runs body(i) for i in [0, n). Work items are independent; callers
/// assemble results by index so the output does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lrl
