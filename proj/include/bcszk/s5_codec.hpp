#pragma once

#include <optional>

#include "bcszk/constraint.hpp"
#include "bcszk/perm5.hpp"

namespace bcszk {

// Boolean encoding of S5: element gamma_j (the fixed lexicographic
// enumeration, gamma_0 = identity) is the 7-bit binary expansion of j,
// most-significant bit first, with bit 1 written as '-' (true). Indices
// 120..127 are invalid codes.
constexpr int kS5CodeBits = 7;

SignVec s5_index_to_bits(int index);              // 7 signs
std::optional<int> s5_bits_to_index(const SignVec& bits);  // nullopt if >= 120 or wrong size

std::string s5_encode(const Perm5& g);            // 7 sign characters
Perm5 s5_decode(const std::string& code);         // throws InvalidCode

}  // namespace bcszk
