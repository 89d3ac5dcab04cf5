#pragma once

#include <cmath>
#include <cstdint>

#include "havsim/angles.hpp"

namespace havsim {

/// Deterministic generator built on the SplitMix64 mixing
/// function. All sampling transforms are implemented here instead of using
/// std::*_distribution, whose output is implementation-defined; this keeps
/// scenario generation reproducible across compilers and standard libraries.
///
/// Substreams are derived by hashing (seed, tag) pairs, so parallel batch
/// code can hand out independent streams without coordinating draw counts.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform angle in (-pi, pi].
    double uniform_angle() { return kPi - kTwoPi * uniform01(); }

    /// Normal via the Box-Muller cosine branch (no cached second value).
    double normal(double mu, double sigma) {
        double u1 = 1.0 - uniform01();  // (0, 1]
        double u2 = uniform01();
        return mu + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

    /// Rayleigh via the inverse CDF.
    double rayleigh(double sigma) {
        double u = 1.0 - uniform01();  // (0, 1]
        return sigma * std::sqrt(-2.0 * std::log(u));
    }

    /// Independent substream for (this seed, tag).
    Rng derive(std::uint64_t tag) const {
        return Rng(mix(seed_ ^ mix(tag + 0x632BE59BD9B4E019ULL)));
    }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

}  // namespace havsim
