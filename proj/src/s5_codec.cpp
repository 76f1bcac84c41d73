#include "bcszk/s5_codec.hpp"

namespace bcszk {

SignVec s5_index_to_bits(int index) {
    if (index < 0 || index >= kS5Order)
        throw InvalidCode("S5 index out of range: " + std::to_string(index));
    SignVec bits(kS5CodeBits);
    for (int b = 0; b < kS5CodeBits; ++b) {
        int shift = kS5CodeBits - 1 - b;
        bits[b] = ((index >> shift) & 1) ? Sign(-1) : Sign(+1);
    }
    return bits;
}

std::optional<int> s5_bits_to_index(const SignVec& bits) {
    if (static_cast<int>(bits.size()) != kS5CodeBits) return std::nullopt;
    int index = 0;
    for (Sign s : bits) index = (index << 1) | (s < 0 ? 1 : 0);
    if (index >= kS5Order) return std::nullopt;
    return index;
}

std::string s5_encode(const Perm5& g) { return signs_to_string(s5_index_to_bits(s5_index(g))); }

Perm5 s5_decode(const std::string& code) {
    auto index = s5_bits_to_index(string_to_signs(code));
    if (!index) throw InvalidCode("not a valid 7-bit S5 code: " + code);
    return s5_element(*index);
}

}  // namespace bcszk
