#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace kostlan {

// splitmix64 step; used only for seed derivation, not as the sampling engine.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Well-spread 64-bit hash of (seed, index[, tag]). Distinct inputs map to
// decorrelated outputs, so per-trial streams never depend on execution order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t tag = 0) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s = index ^ 0xD1B54A32D192ED03ULL;
    std::uint64_t b = splitmix64(s);
    s = a ^ (b + 0x8CB92BA72F3D8DD7ULL * (tag + 1));
    splitmix64(s);
    return splitmix64(s);
}

// Counter-based stream: fully determined by (master_seed, index, tag).
// All mappings from raw bits to variates are written out here so that results
// are reproducible across standard library implementations.
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, std::uint64_t index, std::uint64_t tag = 0)
        : gen_(mix_seed(master_seed, index, tag)) {}

    explicit RandomStream(std::uint64_t raw_seed) : gen_(raw_seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform on [0, 1)
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // uniform on (0, 1]
    double uniform_open() { return 1.0 - uniform(); }

    std::uint64_t uniform_below(std::uint64_t bound) {
        // modulo bias is < 2^-50 for the bounds used here (trial counts, resamples)
        return gen_() % bound;
    }

    // centered complex Gaussian with E|z|^2 = variance
    std::complex<double> complex_gaussian(double variance = 1.0) {
        const double r = std::sqrt(-variance * std::log(uniform_open()));
        const double phi = 2.0 * std::numbers::pi * uniform();
        return std::polar(r, phi);
    }

    // real standard normal (Box-Muller, one value per call)
    double gaussian() {
        const double r = std::sqrt(-2.0 * std::log(uniform_open()));
        return r * std::cos(2.0 * std::numbers::pi * uniform());
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace kostlan
