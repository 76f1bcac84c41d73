#pragma once

#include "bcszk/simulator.hpp"

namespace bcszk {

// Exact answer-pair distribution for one question pair of a compiled game.
// Cross-constraint pairs whose draws are independent come out factored as a
// product of marginals (their joint tables can be far too large to list).
struct AnswerPairDistribution {
    bool factored = false;
    std::map<std::pair<std::string, std::string>, Rat> joint;
    std::map<std::string, Rat> left, right;

    Rat prob(const std::string& a, const std::string& b) const;
    Int support_size() const;
    Rat total_mass() const;

    // Exact equality as distributions (factored forms expanded against
    // joint forms through pointwise checks).
    bool same_distribution(const AnswerPairDistribution& other) const;
};

// Packed-code form of the pair distribution: counts over mixed-radix codes
// of the two windows' atom values, against a common denominator. The
// exhaustive oracle-equivalence checks run on this form, because joint
// supports of clause-window pairs can run to millions of entries and
// materializing strings for them is pointless.
struct CodedPairDistribution {
    bool factored = false;
    std::uint64_t right_space = 1;  // radix of the right window's code
    std::map<std::uint64_t, Int> joint;  // key = left_code * right_space + right_code
    Int total = 1;
    std::map<std::uint64_t, Int> left, right;  // factored marginal counts
    Int left_total = 1, right_total = 1;

    Int support_size() const;
    // Exact distribution equality across forms.
    bool same_distribution(const CodedPairDistribution& other) const;
};

CodedPairDistribution exact_distribution_coded(const CompiledGame& g, int question_a,
                                               int question_b,
                                               const Limits& limits = default_limits());

// The analytic oracle: enumerates the minimal seed set of the pair's answer
// procedure. Tableau entries enter as words over independent uniform
// prefix-products of the randomizer columns; over-budget cones are reduced
// by eliminating once-used seeds (each elimination is a bijective change of
// variables), and row-4 product windows across constraints use their
// closed-form marginal (uniform over fixed-product tuples). Throws
// BudgetExceeded with the cone size when no reduction brings the
// enumeration within limits.oracle_budget.
AnswerPairDistribution exact_distribution(const CompiledGame& g, int question_a, int question_b,
                                          const Limits& limits = default_limits());

// The honest prover's answer-pair distribution under exact enumeration of
// its shared tapes (share tape + randomizer tapes), with the same engine.
AnswerPairDistribution honest_exact_distribution(const CompiledGame& g,
                                                 const Assignment& phi_star, int question_a,
                                                 int question_b,
                                                 const Limits& limits = default_limits());

// --- statistical zero-knowledge check --------------------------------------

struct ZkPairResult {
    int question_a = 0, question_b = 0;
    Rat tv;                      // exact total variation empirical vs oracle
    Int support;                 // oracle support size
    std::uint64_t samples = 0;   // samples used (after any rerun)
    double threshold = 0;        // 3 * sqrt(support / samples)
    bool ok = false;
};

struct ZkReport {
    std::vector<ZkPairResult> pairs;
    std::uint64_t samples_per_pair = 0;
    bool pi_prime_invariant = false;  // tables identical under two verifier distributions
    bool all_ok = false;
};

// Per-pair TV between the empirical simulator distribution and the exact
// oracle; flagged pairs rerun at 10x the sample count before failing. The
// per-pair tables are recomputed under two different verifier distributions
// and must come out byte-identical (the sampler never reads them).
// `pair_list` empty means every unordered question pair.
ZkReport zk_check(const CompiledGame& g, std::uint64_t samples_per_pair, std::uint64_t seed,
                  const Limits& limits = default_limits(),
                  std::vector<std::pair<int, int>> pair_list = {});

std::string zk_report_to_json(const ZkReport& report);

}  // namespace bcszk
