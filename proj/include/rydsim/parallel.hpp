#pragma once

#include <cstddef>
#include <functional>

namespace rydsim {

// Executes body(i) for every i in [0, count). Implementations may run bodies
// concurrently; bodies only write to their own output slot.
using ParallelFor = std::function<void(std::size_t count, const std::function<void(std::size_t)>& body)>;

inline void serial_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    for (std::size_t i = 0; i < count; ++i) body(i);
}

}  // namespace rydsim
