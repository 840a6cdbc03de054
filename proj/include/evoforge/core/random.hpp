#pragma once

#include <cstdint>
#include <random>

namespace evoforge {

/// Seeded random source whose draws are identical across standard libraries
/// (the std distributions are implementation-defined, mt19937_64 is not).
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n)
    {
        // Rejection sampling keeps the draw unbiased.
        std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    std::uint64_t next() { return engine_(); }

    /// Independent stream derived from this generator's seed material.
    Rng split(std::uint64_t stream)
    {
        std::uint64_t s = engine_() ^ (stream * 0x9E3779B97F4A7C15ULL);
        return Rng(s);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

} // namespace evoforge
