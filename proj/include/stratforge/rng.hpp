#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace stratforge {

// Deterministic sampling helpers. std::shuffle and the std distributions are
// implementation-defined, so anything that must reproduce across platforms
// goes through these instead.

// Uniform draw from [0, bound) via rejection sampling on mt19937_64 output.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

// In-place Fisher-Yates.
template <typename T>
void shuffle_det(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
        using std::swap;
        swap(v[i - 1], v[j]);
    }
}

// First k elements of a deterministic shuffle of [0, n). k is clamped to n.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed);

} // namespace stratforge
