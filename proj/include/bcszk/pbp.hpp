#pragma once

#include <functional>

#include "bcszk/circuit.hpp"
#include "bcszk/perm5.hpp"

namespace bcszk {

// Width-5 permutation branching programs. An instruction reads one variable
// and contributes one of its two permutations; the program value is the
// ordered product. The program recognizes a constraint C when it evaluates
// to sigma (a 5-cycle) exactly on C's satisfying assignments and to the
// identity elsewhere.
struct PbpInstruction {
    std::string var;
    Perm5 on_plus;   // contributed when the variable is +1 (false)
    Perm5 on_minus;  // contributed when the variable is -1 (true)
};

struct Pbp {
    std::vector<PbpInstruction> instructions;
    Perm5 sigma;

    int depth() const { return static_cast<int>(instructions.size()); }
};

Perm5 eval_pbp(const Pbp& p, const Assignment& phi);  // throws UnboundVariable

// Barrington compilation of a fan-in-2 circuit: the result recognizes the
// circuit's constraint with length at most 4^depth (Not gates and constants
// are folded for free; Or goes through De Morgan). `sigma` defaults to the
// pinned cycle and must be a 5-cycle.
Pbp compile(const Circuit& c, std::optional<Perm5> sigma = std::nullopt,
            const Limits& limits = default_limits(),
            std::optional<std::string> anchor = std::nullopt);

// Convenience: compiles the constraint's indicator circuit, anchoring any
// constant-gate instructions on the first context variable.
Pbp compile_constraint(const Constraint& c, std::optional<Perm5> sigma = std::nullopt,
                       const Limits& limits = default_limits());

// Exhaustive recognition check over the constraint's context.
bool recognizes(const Pbp& p, const Constraint& c, const Limits& limits = default_limits());

// Lifts a program over V to a program over share variables: each
// instruction's variable v is replaced by a (2n-1)-instruction gadget over
// v's n shares that contributes on_plus / on_minus according to the parity
// of the shares. The lifted program recognizes the share-product preimage of
// whatever the original recognizes. `share_name(v, k)` names copy k (1-based).
Pbp lift_pbp(const Pbp& p, int degree,
             const std::function<std::string(const std::string&, int)>& share_name);

// JSON dump format: {"instructions":[[var, plus, minus]...], "sigma": "..."}
// with permutations in one-line notation.
std::string pbp_to_json_string(const Pbp& p);
Pbp pbp_from_json_string(const std::string& text);

}  // namespace bcszk
