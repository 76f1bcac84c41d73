#pragma once

#include "bcszk/compiled_game.hpp"

namespace bcszk {

// Samples the compiled game's answer-pair distribution for one question
// pair. When neither window is a row-4 product clause (Case A), one global
// assignment to the shares and randomizers is drawn and the rows are filled
// by the conjugation recurrence with no satisfaction requirement. When a
// product clause is involved (Case B), each constraint independently draws a
// uniform satisfying base assignment plus randomizers and completes it.
// The output wins the subdivided game on every draw; the sampler never reads
// the verifier's question distribution.
class PairSampler {
  public:
    PairSampler(const CompiledGame& g, int question_a, int question_b);

    struct Draw {
        std::vector<int> left, right;  // atom values per window
    };

    Draw sample(Rng& rng) const;
    // Reuses the draw's buffers; the bulk-sampling kernels call this.
    void sample_into(Rng& rng, Draw& d) const;

    bool wins(const Draw& d) const;
    std::string left_string(const Draw& d) const;
    std::string right_string(const Draw& d) const;

    bool case_b() const { return case_b_; }
    int left_constraint() const { return i_; }
    int right_constraint() const { return k_; }
    const ClauseWindow& left_window() const;
    const ClauseWindow& right_window() const;

  private:
    std::vector<int> extract(int constraint, const ClauseWindow& w, const SignVec& base,
                             const std::vector<int>& rows,
                             const std::vector<int>& randomizers) const;

    const CompiledGame* g_;
    int i_, k_;    // constraints
    int wa_, wb_;  // window indices within the tableau
    ClauseWindow left_window_, right_window_;
    bool case_b_ = false;
    // Case A: the union of base variables, drawn once per sample; per-side
    // maps from base context position to the union index.
    VarList union_base_;
    std::vector<int> base_map_left_, base_map_right_;
    // Winning check: positions of shared atoms in the two value vectors.
    std::vector<std::pair<int, int>> shared_values_;
};

// One-shot convenience around PairSampler.
std::pair<std::string, std::string> simulate_answers(const CompiledGame& g, int question_a,
                                                     int question_b, Rng& rng);

// Batch sampling kernel: counts of sampled answer pairs under independently
// seeded 4096-sample blocks. The parallel version distributes blocks across
// OpenMP threads and merges per-thread tables; block seeding makes the two
// paths return identical tables.
using SampleCounts = std::map<std::pair<std::string, std::string>, std::uint64_t>;
SampleCounts sample_counts_serial(const CompiledGame& g, int question_a, int question_b,
                                  std::uint64_t samples, std::uint64_t seed);
SampleCounts sample_counts(const CompiledGame& g, int question_a, int question_b,
                           std::uint64_t samples, std::uint64_t seed);

// Shared honest-prover tapes: the obliviation share tape over X x [degree-1]
// and one randomizer tape per constraint.
struct HonestTapes {
    SignVec share_tape;                          // variable-major, degree-1 slots per variable
    std::vector<std::vector<int>> randomizers;   // per constraint, S5 indices
};

HonestTapes draw_honest_tapes(const CompiledGame& g, Rng& rng);

// Honest provers hold a satisfying assignment of the original system; each
// round they lift it through the shared tape, complete each tableau, and
// answer with window restrictions. Every answer pair wins, for every tape.
class HonestProver {
  public:
    HonestProver(const CompiledGame& g, Assignment phi_star);  // throws NotSatisfying

    std::string answer(int question, const HonestTapes& tapes) const;
    std::vector<int> answer_values(int question, const HonestTapes& tapes) const;

    // As a shared-randomness strategy over the subdivided game: 64-bit seeds
    // expand to tapes through the pinned generator.
    SharedRandomnessStrategy as_strategy() const;

    const CompiledGame& game() const { return *g_; }
    const Assignment& assignment() const { return phi_star_; }

    // The lifted base signs of constraint i under the given tape.
    SignVec lifted_base(int constraint, const HonestTapes& tapes) const;

  private:
    const CompiledGame* g_;
    Assignment phi_star_;
};

}  // namespace bcszk
