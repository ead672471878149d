#pragma once

#include <cstddef>

#include "rydsim/parallel.hpp"

namespace rydsim::cli {

// Worker count from RYDSIM_WORKERS, falling back to the hardware concurrency.
std::size_t default_worker_count();

// Runs the body on up to `workers` threads; indices are claimed from a shared
// counter and the first exception is rethrown on the calling thread.
ParallelFor make_thread_pool(std::size_t workers);

}  // namespace rydsim::cli
