#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace bcszk {

// An element of S5 in one-line notation. Internally 0-based images; the
// one-line string form uses digits 1..5 ("12345" is the identity).
// Composition convention: (a * b)(x) = a(b(x)).
struct Perm5 {
    std::array<std::uint8_t, 5> img{0, 1, 2, 3, 4};

    static Perm5 identity() { return Perm5{}; }
    static Perm5 from_one_line(const std::string& digits);   // e.g. "23451"
    static Perm5 from_cycle(const std::vector<int>& cycle);  // 1-based points

    std::string one_line() const;

    std::uint8_t apply(std::uint8_t x) const { return img[x]; }

    Perm5 inverse() const;
    bool is_identity() const { return *this == identity(); }
    bool is_five_cycle() const;
    bool is_valid() const;  // a bijection on {0..4}

    friend Perm5 operator*(const Perm5& a, const Perm5& b) {
        Perm5 r;
        for (int x = 0; x < 5; ++x) r.img[x] = a.img[b.img[x]];
        return r;
    }

    bool operator==(const Perm5&) const = default;
    auto operator<=>(const Perm5&) const = default;
};

inline Perm5 conjugate(const Perm5& g, const Perm5& by) { return by * g * by.inverse(); }
inline Perm5 commutator(const Perm5& a, const Perm5& b) {
    return a * b * a.inverse() * b.inverse();
}

// The fixed enumeration of S5: lexicographic on one-line notation, so index 0
// is the identity. These indices are what the 7-bit boolean encoding uses.
constexpr int kS5Order = 120;

int s5_index(const Perm5& g);         // 0..119, lexicographic rank
Perm5 s5_element(int index);          // inverse of s5_index; throws InvalidCode if >= 120

// Index-level group operations backed by precomputed tables; these are the
// workhorses of the enumeration kernels.
struct S5Tables {
    std::array<std::array<std::uint8_t, kS5Order>, kS5Order> mul;  // mul[a][b] = index(a*b)
    std::array<std::uint8_t, kS5Order> inv;
    std::array<Perm5, kS5Order> element;
};
const S5Tables& s5_tables();

inline int s5_mul(int a, int b) { return s5_tables().mul[a][b]; }
inline int s5_inv(int a) { return s5_tables().inv[a]; }

// Deterministic conjugator: the least (by one-line order) theta with
// theta * g * theta^-1 = h, for g, h of equal cycle type. Throws InvalidCode
// if none exists.
Perm5 conjugator_between(const Perm5& g, const Perm5& h);

// Pinned gadget constants for the branching-program compiler. sigma_default
// is the output cycle used when no target is specified; (alpha0, beta0) is
// the base pair of 5-cycles whose commutator rho0 is again a 5-cycle.
struct PinnedCycles {
    Perm5 sigma_default;
    Perm5 alpha0;
    Perm5 beta0;
    Perm5 rho0;  // commutator(alpha0, beta0)
};
const PinnedCycles& pinned_cycles();

}  // namespace bcszk
