#pragma once

#include <cstdint>

namespace myoctl {

enum class SeedStream : std::uint64_t { source = 1, encoder = 2 };

// splitmix64 finalizer; gives each stochastic component its own stream from
// the single session seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, SeedStream stream) noexcept
{
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(stream) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace myoctl
