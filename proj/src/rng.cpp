#include "stratforge/rng.hpp"

#include <numeric>

namespace stratforge {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == 0) return 0;
    // Largest multiple of bound that fits; rejecting above it removes modulo bias.
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x > limit);
    return x % bound;
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    shuffle_det(idx, rng);
    if (k < n) idx.resize(k);
    return idx;
}

} // namespace stratforge
