#include "bcszk/rational.hpp"

#include "bcszk/errors.hpp"

namespace bcszk {

Rat rat_from_string(const std::string& text) {
    try {
        Rat q(text);
        if (q.get_den() == 0) throw FormatError("rational with zero denominator: " + text);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw FormatError("not a rational: '" + text + "'");
    }
}

std::string rat_to_string(const Rat& q) { return q.get_str(); }

double rat_to_double(const Rat& q) { return q.get_d(); }

std::string rat_to_decimal_string(const Rat& q, int digits) {
    Int num = q.get_num();
    Int den = q.get_den();
    bool negative = num < 0;
    if (negative) num = -num;
    Int scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    Int scaled = num * scale / den;  // truncating division
    Int whole = scaled / scale;
    Int frac = scaled % scale;
    std::string frac_str = frac.get_str();
    if (static_cast<int>(frac_str.size()) < digits)
        frac_str = std::string(digits - frac_str.size(), '0') + frac_str;
    std::string out = (negative ? "-" : "") + whole.get_str();
    if (digits > 0) out += "." + frac_str;
    return out;
}

}  // namespace bcszk
