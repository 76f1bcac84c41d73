#include "bcszk/perm5.hpp"

#include <algorithm>

#include "bcszk/errors.hpp"

namespace bcszk {

Perm5 Perm5::from_one_line(const std::string& digits) {
    if (digits.size() != 5) throw FormatError("one-line permutation needs 5 digits: " + digits);
    Perm5 p;
    for (int i = 0; i < 5; ++i) {
        char c = digits[i];
        if (c < '1' || c > '5') throw FormatError("bad permutation digit in " + digits);
        p.img[i] = static_cast<std::uint8_t>(c - '1');
    }
    if (!p.is_valid()) throw FormatError("not a permutation: " + digits);
    return p;
}

Perm5 Perm5::from_cycle(const std::vector<int>& cycle) {
    Perm5 p;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        int from = cycle[i] - 1;
        int to = cycle[(i + 1) % cycle.size()] - 1;
        if (from < 0 || from > 4 || to < 0 || to > 4) throw FormatError("cycle point out of range");
        p.img[from] = static_cast<std::uint8_t>(to);
    }
    if (!p.is_valid()) throw FormatError("repeated point in cycle");
    return p;
}

std::string Perm5::one_line() const {
    std::string s(5, '?');
    for (int i = 0; i < 5; ++i) s[i] = static_cast<char>('1' + img[i]);
    return s;
}

Perm5 Perm5::inverse() const {
    Perm5 r;
    for (int x = 0; x < 5; ++x) r.img[img[x]] = static_cast<std::uint8_t>(x);
    return r;
}

bool Perm5::is_valid() const {
    std::array<bool, 5> seen{};
    for (int x = 0; x < 5; ++x) {
        if (img[x] > 4 || seen[img[x]]) return false;
        seen[img[x]] = true;
    }
    return true;
}

bool Perm5::is_five_cycle() const {
    int x = 0;
    for (int steps = 1; steps < 5; ++steps) {
        x = img[x];
        if (x == 0) return false;
    }
    return img[x] == 0;
}

int s5_index(const Perm5& g) {
    // Lexicographic rank via the factorial number system.
    std::array<std::uint8_t, 5> rest{0, 1, 2, 3, 4};
    int n = 5;
    int rank = 0;
    static const int factorial[5] = {1, 1, 2, 6, 24};
    for (int i = 0; i < 5; ++i) {
        auto* begin = rest.begin();
        auto it = std::find(begin, begin + n, g.img[i]);
        int pos = static_cast<int>(it - begin);
        rank += pos * factorial[n - 1];
        std::copy(it + 1, begin + n, it);
        --n;
    }
    return rank;
}

Perm5 s5_element(int index) {
    if (index < 0 || index >= kS5Order)
        throw InvalidCode("S5 index out of range: " + std::to_string(index));
    std::array<std::uint8_t, 5> rest{0, 1, 2, 3, 4};
    static const int factorial[5] = {1, 1, 2, 6, 24};
    Perm5 p;
    int n = 5;
    for (int i = 0; i < 5; ++i) {
        int f = factorial[n - 1];
        int pos = index / f;
        index %= f;
        p.img[i] = rest[pos];
        std::copy(rest.begin() + pos + 1, rest.begin() + n, rest.begin() + pos);
        --n;
    }
    return p;
}

const S5Tables& s5_tables() {
    static const S5Tables tables = [] {
        S5Tables t;
        for (int a = 0; a < kS5Order; ++a) t.element[a] = s5_element(a);
        for (int a = 0; a < kS5Order; ++a) {
            t.inv[a] = static_cast<std::uint8_t>(s5_index(t.element[a].inverse()));
            for (int b = 0; b < kS5Order; ++b)
                t.mul[a][b] = static_cast<std::uint8_t>(s5_index(t.element[a] * t.element[b]));
        }
        return t;
    }();
    return tables;
}

Perm5 conjugator_between(const Perm5& g, const Perm5& h) {
    for (int i = 0; i < kS5Order; ++i) {
        Perm5 theta = s5_tables().element[i];
        if (theta * g * theta.inverse() == h) return theta;
    }
    throw InvalidCode("no conjugator between " + g.one_line() + " and " + h.one_line());
}

const PinnedCycles& pinned_cycles() {
    static const PinnedCycles pinned = [] {
        PinnedCycles p;
        p.sigma_default = Perm5::from_cycle({1, 2, 3, 4, 5});
        p.alpha0 = p.sigma_default;
        // Least 5-cycle (in the fixed enumeration order) whose commutator with
        // alpha0 is again a 5-cycle.
        for (int i = 0; i < kS5Order; ++i) {
            Perm5 beta = s5_tables().element[i];
            if (!beta.is_five_cycle()) continue;
            Perm5 rho = commutator(p.alpha0, beta);
            if (rho.is_five_cycle()) {
                p.beta0 = beta;
                p.rho0 = rho;
                return p;
            }
        }
        throw InvalidCode("no commutator base pair found");  // cannot happen in S5
    }();
    return pinned;
}

}  // namespace bcszk
