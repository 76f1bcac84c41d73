#pragma once

#include "bcszk/constraint.hpp"

namespace bcszk {

// Fan-in-2 boolean circuits over named variables. Gates are stored in
// topological order; depth counts And/Or gates on the longest path (Not and
// the leaves are free, matching how the branching-program compiler spends
// length).
class Circuit {
  public:
    struct Gate {
        enum class Op { Input, Const, Not, And, Or };
        Op op;
        int a = -1, b = -1;  // operand gate indices
        std::string var;     // Input
        bool value = false;  // Const
    };

    int add_input(const std::string& var);
    int add_const(bool value);
    int add_not(int a);
    int add_and(int a, int b);
    int add_or(int a, int b);
    void set_output(int gate) { output_ = gate; }

    int output() const { return output_; }
    const std::vector<Gate>& gates() const { return gates_; }
    const Gate& gate(int g) const { return gates_.at(g); }

    int depth() const;       // And/Or gates on the longest path to the output
    int gate_depth(int g) const;

    bool eval(const Assignment& phi) const;  // true iff the output is true

    VarList input_variables() const;  // in first-use order

  private:
    int check(int g) const;
    std::vector<Gate> gates_;
    int output_ = -1;
};

// The indicator circuit of an explicit constraint: a balanced OR tree over
// the satisfying assignments' minterm AND trees. Depth is at most
// ceil(log2 |V|) + ceil(log2 |C|).
Circuit circuit_from_constraint(const Constraint& c, const Limits& limits = default_limits());

}  // namespace bcszk
