#pragma once

#include <cstdint>
#include <random>

#include "skewkrylov/types.hpp"

namespace skewkrylov {

/// Seeded pseudo-random source shared by instance generation and the checks.
///
/// The stream is std::mt19937_64 seeded with the 64-bit seed as given;
/// uniform and normal variates come from the standard distributions. Sub-streams
/// (retries, per-trial draws) use derive_seed, a splitmix64 finalizer applied to
/// seed + stream * golden ratio, so that nearby seeds do not produce correlated streams.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
    bool bernoulli(double p) { return std::bernoulli_distribution(p)(engine_); }

    Vector uniform_vector(Index n, double lo, double hi) {
        Vector v(n);
        for (Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
        return v;
    }

    Vector normal_vector(Index n) {
        Vector v(n);
        for (Index i = 0; i < n; ++i) v[i] = normal();
        return v;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + stream * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace skewkrylov
