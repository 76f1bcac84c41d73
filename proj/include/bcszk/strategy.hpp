#pragma once

#include <functional>

#include "bcszk/game.hpp"

namespace bcszk {

// One deterministic answer per question. Used both as a single-player answer
// function and, in pairs, for classical value search.
struct DeterministicStrategy {
    std::vector<Assignment> answer;  // indexed by question

    void validate(const Game& game) const;  // answers must satisfy their constraints
};

// Honest play from a global satisfying assignment: answer(i) = phi*|V_i.
DeterministicStrategy strategy_from_assignment(const Bcs& b, const Assignment& phi_star);

// The deterministic correlation where player one plays `a` and player two
// plays `b` (pass the same strategy twice for symmetric play).
Correlation correlation_from_deterministic(const Game& game, const DeterministicStrategy& a,
                                           const DeterministicStrategy& b);

// Provers sharing a uniformly random seed from a finite space; each seed
// induces a deterministic strategy. seed_count may exceed what can be
// enumerated; enumeration-based consumers must check.
struct SharedRandomnessStrategy {
    Int seed_count;
    std::function<Assignment(const Int& seed, int question)> answer;

    // Validates the induced strategies for seeds [0, limit).
    void validate(const Game& game, const Int& limit) const;
};

// Averaged correlation of a shared-randomness strategy; requires the seed
// space to be enumerable within `max_seeds`.
Correlation correlation_from_shared_randomness(const Game& game,
                                               const SharedRandomnessStrategy& s,
                                               std::uint64_t max_seeds = 1 << 20);

}  // namespace bcszk
