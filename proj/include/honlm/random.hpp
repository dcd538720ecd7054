#pragma once

#include <cmath>
#include <cstdint>

namespace honlm {

/// SplitMix64 (Steele, Lea & Flood, "Fast splittable pseudorandom number
/// generators", OOPSLA 2014). Output i of a stream seeded with s equals
/// mix64(s + (i+1) * 0x9E3779B97F4A7C15) — a pure function of the seed and
/// the call index, so streams reproduce exactly on any platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in (0, 1]: (top 53 bits + 1) * 2^-53.
    double next_unit() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1p-53;
    }

private:
    std::uint64_t state_;
};

/// Standard-normal stream via Box-Muller on SplitMix64 uniforms. Each call
/// consumes exactly two consecutive uniforms u1, u2 and returns
/// sqrt(-2 ln u1) * cos(2 pi u2); the sine branch is discarded so the
/// uniform-to-normal mapping has a fixed, documented call order.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

    double next() {
        const double u1 = rng_.next_unit();
        const double u2 = rng_.next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

private:
    static constexpr double kTwoPi = 6.283185307179586476925286766559;
    SplitMix64 rng_;
};

}  // namespace honlm
