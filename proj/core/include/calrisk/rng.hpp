#pragma once

#include <cstdint>

namespace calrisk {

/// SplitMix64 generator with per-stream increments.
///
/// All stochastic code in the library draws through this engine rather than
/// <random> distributions so that results are bit-identical across platforms
/// and standard-library versions. A stream is (state, odd increment); derived
/// child streams (see derive_stream) map distinct indices to distinct streams.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed, std::uint64_t increment = kGolden) noexcept
        : state_(seed), inc_(increment | 1ULL) {}

    std::uint64_t next_u64() noexcept {
        state_ += inc_;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) noexcept {
        return lo + next_double() * (hi - lo);
    }

    bool bernoulli(double p) noexcept { return next_double() < p; }

    /// Standard normal via Box-Muller (consumes two uniforms).
    double normal() noexcept;

    /// Gamma(shape) with unit scale, Marsaglia-Tsang; shape > 0.
    double gamma(double shape) noexcept;

    /// Beta(a, b) from two gamma draws; result clamped to (0, 1).
    double beta(double a, double b) noexcept;

    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

private:
    std::uint64_t state_;
    std::uint64_t inc_;
};

/// Injective mix of (master_seed, index) into a child seed.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

/// Derives the child stream for (master_seed, index). Distinct indices give
/// distinct (state, increment) pairs, so derived streams never coincide.
SplitMix64 derive_stream(std::uint64_t master_seed, std::uint64_t index) noexcept;

} // namespace calrisk
