#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace numaopt {

/// Derives an independent child seed from `parent` and a stream name, so that
/// every consumer of randomness (placement, bursts, labels, split, training)
/// draws from its own reproducible sub-stream of one top-level seed.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::string_view name) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
    for (char ch : name) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001b3ULL;
    }
    // splitmix64 finalizer over the combination
    std::uint64_t z = parent + 0x9e3779b97f4a7c15ULL * (h | 1ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::string_view name,
                                    std::uint64_t index) noexcept {
    return derive_seed(derive_seed(parent, name) + index, "#");
}

/// mt19937_64 with distribution conversions spelled out, so sequences are
/// identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

} // namespace numaopt
