#include "bcszk/rng.hpp"

#include "bcszk/errors.hpp"

namespace bcszk {

std::size_t sample_weighted(Rng& rng, const std::vector<Int>& weights) {
    Int total = 0;
    for (const Int& w : weights) total += w;
    if (total <= 0) throw DistributionError("sample_weighted: empty distribution");

    // Draw a uniform integer in [0, total) by assembling 64-bit words and
    // rejecting the overweight tail, then walk the cumulative sums.
    std::size_t bits = mpz_sizeinbase(total.get_mpz_t(), 2);
    std::size_t words = (bits + 63) / 64;
    Int space = Int(1) << static_cast<unsigned>(64 * words);
    Int limit = space - space % total;
    for (;;) {
        Int draw = 0;
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t raw = rng.next_u64();
            Int word;
            mpz_import(word.get_mpz_t(), 1, 1, sizeof(raw), 0, 0, &raw);
            draw = (draw << 64) | word;
        }
        if (draw >= limit) continue;
        Int r = draw % total;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (r < weights[i]) return i;
            r -= weights[i];
        }
        return weights.size() - 1;  // unreachable: r < sum(weights)
    }
}

}  // namespace bcszk
