#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bcszk/constraint.hpp"

namespace bcszk {

// A boolean constraint system: an ordered variable set and a list of
// constraints whose contexts are ordered compatibly with it. Constraint
// indices are 1..m in user-facing text, 0-based in code.
struct Bcs {
    VarList variables;                    // X
    std::vector<Constraint> constraints;  // (V_i, C_i)
    std::vector<std::string> names;       // optional context labels, size 0 or m

    int m() const { return static_cast<int>(constraints.size()); }

    const Constraint& constraint(int i) const { return constraints.at(i); }
    const VarList& context(int i) const { return constraints.at(i).context(); }
    std::string name(int i) const;

    // Checks the structural invariants: non-empty contexts that are
    // subsequences of `variables` in the induced order, no duplicate
    // variables, and consistent label count. Throws FormatError.
    void validate() const;

    bool satisfied_by(const Assignment& phi) const;

    // Exhaustive satisfiability search over 2^|X| global assignments.
    std::optional<Assignment> find_satisfying(const Limits& limits = default_limits()) const;
    bool is_satisfiable(const Limits& limits = default_limits()) const {
        return find_satisfying(limits).has_value();
    }
};

// Ordered intersection of two contexts (order of the first argument).
VarList context_intersection(const VarList& a, const VarList& b);

// max over i of |{(x, j) in V_i x [m] : x in V_j}|.
long long connectivity(const Bcs& b);

}  // namespace bcszk
