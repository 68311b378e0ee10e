#pragma once

#include <cstdint>
#include <random>

namespace qsdc {

// SplitMix64 finalizer. Used both as a seed scrambler and as the stream
// splitting function, so substreams derived from (seed, tag) are stable
// regardless of how much the parent stream has been consumed.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Explicit, forkable randomness source. Every sampling operation in the
// simulator takes a RandomStream& parameter; there is no global RNG.
//
// Splitting rule: fork(tag) derives a child stream whose seed is
// splitmix64(base_seed ^ splitmix64(tag)). Forking depends only on the
// base seed, never on draws already made, so independent rounds can be
// simulated in any order with identical results.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed)
        : seed_(seed), engine_(splitmix64(seed)) {}

    RandomStream fork(std::uint64_t tag) const {
        return RandomStream(splitmix64(seed_ ^ splitmix64(tag)));
    }

    std::uint64_t base_seed() const { return seed_; }

    std::uint64_t next() { return engine_(); }

    // Uniform double in [0, 1) with 53 bits of precision.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform() < p; }

    int bit() { return static_cast<int>(engine_() & 1u); }

    // Uniform index in [0, n). Modulo bias is far below anything the
    // statistical tests can resolve.
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace qsdc
