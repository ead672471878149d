#pragma once

#include <cstdint>
#include <random>

namespace rydsim {

using Engine = std::mt19937_64;

// splitmix64 finalizer applied to (master, index); counter-based so that every
// task seed depends only on its index and never on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline Engine make_engine(std::uint64_t master, std::uint64_t index) {
    return Engine{derive_seed(master, index)};
}

}  // namespace rydsim
