#pragma once

#include <cstdint>

namespace diffusion {

// splitmix64: tiny, fully specified, identical on every platform. All
// randomness in the project flows through explicit seeds into this generator,
// which is what makes scans and searches byte-reproducible.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n); n >= 1. Rejection sampling keeps it unbiased.
    std::uint64_t bounded(std::uint64_t n) {
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + bounded(span));
    }

    // Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Derives an independent stream seed; used to give per-instance generators
// their own seed from one master seed.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
    SplitMix64 g(master ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
    return g.next();
}

} // namespace diffusion
