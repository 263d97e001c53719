#include "govliq/rng.hpp"

#include <cmath>

namespace govliq {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    // Two mixing rounds per counter keep distinct (a, b) pairs on
    // independent streams regardless of the master seed.
    SplitMix64 mix(master ^ (a * 0xD1B54A32D192ED03ULL) ^ (b * 0x8CB92BA72F3D8DD7ULL));
    mix();
    return mix();
}

std::uint32_t poisson_draw(SplitMix64& rng, double mean) {
    if (mean <= 0.0) return 0;
    // Count unit-rate exponential inter-arrivals until their sum exceeds
    // the mean.
    std::uint32_t count = 0;
    double acc = 0.0;
    for (;;) {
        acc += -std::log(1.0 - rng.uniform());
        if (acc > mean) return count;
        ++count;
    }
}

}  // namespace govliq
