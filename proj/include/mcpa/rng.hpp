#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace mcpa {

/// Seeded generator with explicit distribution code, so a (seed, stream)
/// pair yields the same draws on every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Box-Muller, one fresh pair per call.
    double gauss(double mean, double stddev) {
        double u1 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        const double u2 = uniform01();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * mag * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

/// Derives the seed for an independent stream (splitmix64 finalizer), so
/// stream s is a pure function of (seed, s).
inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace mcpa
