#pragma once

#include "bcszk/oracle.hpp"

namespace bcszk::testsupport {

// Reference oracle by plain seed enumeration: Case A enumerates the base
// variables and the randomizers in the windows' dependency cones outright;
// Case B enumerates satisfying base assignments against full randomizer
// cones, independently per constraint across constraints. No uniformity
// shortcuts and no change of variables: this is the yardstick the analytic
// oracle is measured against. Output is the packed-code form with counts
// over the enumerated seed space.
CodedPairDistribution raw_exact_distribution(const CompiledGame& g, int question_a,
                                             int question_b,
                                             const Limits& limits = default_limits());

}  // namespace bcszk::testsupport
