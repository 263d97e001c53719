#pragma once

#include <cstdint>

namespace govliq {

/// Counter-friendly 64-bit PRNG (splitmix64 steps). A fresh engine is
/// derived per Monte Carlo trial so results do not depend on execution
/// order or worker count.
class SplitMix64 {
  public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~std::uint64_t{0}; }

    result_type operator()() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  private:
    std::uint64_t state_;
};

/// Derives an independent stream seed from a master seed and a pair of
/// counters (e.g. grid-point index and trial index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

/// Exact Poisson draw with the given mean (sum-of-exponentials method,
/// evaluated in log space so large means do not underflow).
std::uint32_t poisson_draw(SplitMix64& rng, double mean);

}  // namespace govliq
