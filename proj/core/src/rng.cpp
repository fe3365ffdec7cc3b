#include "calrisk/rng.hpp"

#include <cmath>

namespace calrisk {

namespace {

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

} // namespace

double SplitMix64::normal() noexcept {
    // 1 - u keeps the log argument in (0, 1].
    double u1 = 1.0 - next_double();
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double SplitMix64::gamma(double shape) noexcept {
    if (shape < 1.0) {
        // Boost: Gamma(a) = Gamma(a+1) * U^(1/a)
        double u = 1.0 - next_double();
        return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = 1.0 - next_double();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double SplitMix64::beta(double a, double b) noexcept {
    double x = gamma(a);
    double y = gamma(b);
    double r = x / (x + y);
    if (!(r > 0.0)) r = 0x1.0p-53;
    if (!(r < 1.0)) r = 1.0 - 0x1.0p-53;
    return r;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return mix64(master_seed ^ mix64(index * SplitMix64::kGolden + 1));
}

SplitMix64 derive_stream(std::uint64_t master_seed, std::uint64_t index) noexcept {
    const std::uint64_t state = derive_seed(master_seed, index);
    const std::uint64_t inc = mix64(state + index) | 1ULL;
    return SplitMix64(state, inc);
}

} // namespace calrisk
