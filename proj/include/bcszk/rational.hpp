#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace bcszk {

// Exact rational probabilities. All probability arithmetic outside the
// quantum evaluator uses Rat; doubles appear only for display and for the
// float-tolerance paths.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat make_rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

Rat rat_from_string(const std::string& text);  // "num/den" or "num"

// Lowest-terms "num/den", or just "num" when den == 1.
std::string rat_to_string(const Rat& q);

double rat_to_double(const Rat& q);

// Fixed-point decimal expansion with `digits` digits after the point,
// rounded toward zero. Deterministic; used for report fields.
std::string rat_to_decimal_string(const Rat& q, int digits = 12);

}  // namespace bcszk
