#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace talpiot {

// splitmix64; used for seed derivation, not for simulation draws.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

// Derives a stream seed from a master seed and a path of stream ids
// (e.g. {replicate, batch}). Folding each id through splitmix64 gives
// statistically disjoint streams for distinct paths.
inline std::uint64_t derive_stream_seed(std::uint64_t master,
                                        std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = SplitMix64(master).next();
    for (std::uint64_t id : path) {
        s = SplitMix64(s ^ (id * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL)).next();
    }
    return s;
}

// A seeded random stream. All simulation randomness flows through this
// class; uniform01() is hand-rolled from raw 64-bit output so the draw
// sequence is a pure function of the seed, independent of the standard
// library's distribution implementations.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    static RngStream derived(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
        return RngStream(derive_stream_seed(master, path));
    }

    std::uint64_t next_u64() { return engine_(); }

    // in [0, 1)
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Always consumes exactly one draw, whatever p is.
    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace talpiot
