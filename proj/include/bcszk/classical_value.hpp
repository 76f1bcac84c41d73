#pragma once

#include "bcszk/strategy.hpp"

namespace bcszk {

// Exact classical value: the maximum winning probability over pairs of
// deterministic answer functions (the two players need not play alike).
//
// Two implementations with identical results:
//   * classical_value_serial enumerates every (A, B) pair outright. It is
//     the reference: obviously correct, quadratic in the strategy count.
//   * classical_value enumerates A and, for each A, picks the best answer
//     B(j) per question j (the terms of omega split by j, so per-question
//     best response is exact). The A loop is OpenMP-parallel; the max
//     reduction is order-independent, so the result is deterministic.
//
// Both guard their evaluation count against limits.search_bound.

Rat classical_value_serial(const Game& game, const Limits& limits = default_limits());
Rat classical_value(const Game& game, const Limits& limits = default_limits());

// The maximizing pair found by the best-response search (for tests and the
// CLI's --witness output).
struct ValueWitness {
    Rat value;
    DeterministicStrategy row_player;
    DeterministicStrategy column_player;
};
ValueWitness classical_value_witness(const Game& game, const Limits& limits = default_limits());

}  // namespace bcszk
