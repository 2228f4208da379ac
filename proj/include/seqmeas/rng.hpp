#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace seqmeas {

/// Deterministic random primitives built directly on std::mt19937_64.
///
/// The engine itself is fully specified by the standard, but the standard
/// distributions are not, so every transform used here is spelled out by
/// hand. Identical seeds therefore give identical streams on any platform.

/// One step of the SplitMix64 generator. Used for seed derivation only.
std::uint64_t splitmix64(std::uint64_t &state);

/// Seed for an independent stream, derived from a root seed and an index.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

/// Uniform double in [0, 1) with 53 random bits.
double uniform_unit(std::mt19937_64 &rng);

/// Uniform integer in [0, n), unbiased (rejection sampling). Requires n > 0.
std::uint64_t uniform_below(std::mt19937_64 &rng, std::uint64_t n);

/// Standard normal deviate via Box-Muller.
double standard_normal(std::mt19937_64 &rng);

/// In-place Fisher-Yates shuffle.
template <typename T>
void shuffle_in_place(std::vector<T> &items, std::mt19937_64 &rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace seqmeas
