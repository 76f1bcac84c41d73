#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bcszk/rational.hpp"

namespace bcszk {

// Seed-stream derivation. Used to derive independent per-round / per-sample
// seeds from one master seed so that parallel loops stay deterministic.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master ^ (0x6a09e667f3bcc909ULL + stream * 0x100000001b3ULL);
    return splitmix64(s);
}

// The project-wide PRNG: std::mt19937_64 (bit-stream fixed by the standard,
// so transcripts reproduce across platforms). All bounded draws go through
// rejection sampling below; std::uniform_int_distribution is never used
// because its output is implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform integer in [0, bound) by rejection. bound >= 1.
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        std::uint64_t limit = ~0ULL - (~0ULL % bound);
        for (;;) {
            std::uint64_t r = engine_();
            if (r < limit) return r % bound;
        }
    }

    bool coin() { return (engine_() & 1ULL) != 0; }

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  private:
    std::mt19937_64 engine_;
};

// Samples an index from an exact finite distribution given by nonnegative
// integer weights (the common-denominator numerators). Exact: every index is
// returned with probability weight[i] / sum(weights).
std::size_t sample_weighted(Rng& rng, const std::vector<Int>& weights);

}  // namespace bcszk
