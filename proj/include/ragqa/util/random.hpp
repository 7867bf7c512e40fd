#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace ragqa {

/// Fisher-Yates driven directly by mt19937_64 output. std::shuffle and
/// std::uniform_int_distribution are implementation-defined, this is not,
/// so a given seed yields the same permutation on every platform.
template <typename T>
void deterministic_shuffle(std::span<T> items, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::uint64_t bound = i;
        // Rejection sampling removes modulo bias.
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
        std::uint64_t r = rng();
        while (r >= limit) r = rng();
        const std::size_t j = static_cast<std::size_t>(r % bound);
        using std::swap;
        swap(items[i - 1], items[j]);
    }
}

}  // namespace ragqa
