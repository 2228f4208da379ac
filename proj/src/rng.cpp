#include "seqmeas/rng.hpp"

#include <cmath>

namespace seqmeas {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
} // namespace

std::uint64_t splitmix64(std::uint64_t &state) {
    state += kGolden;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
    std::uint64_t state = root ^ (kGolden * (index + 1));
    std::uint64_t a = splitmix64(state);
    std::uint64_t b = splitmix64(state);
    return a ^ (b << 1);
}

double uniform_unit(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_below(std::mt19937_64 &rng, std::uint64_t n) {
    // Rejection from the top of the range keeps the draw unbiased.
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

double standard_normal(std::mt19937_64 &rng) {
    // Box-Muller; u1 is kept away from 0 so the log stays finite.
    double u1;
    do {
        u1 = uniform_unit(rng);
    } while (u1 <= 0.0);
    const double u2 = uniform_unit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

} // namespace seqmeas
