#include "bcszk/circuit.hpp"

#include <algorithm>

namespace bcszk {

int Circuit::check(int g) const {
    if (g < 0 || g >= static_cast<int>(gates_.size()))
        throw DomainMismatch("gate index out of range");
    return g;
}

int Circuit::add_input(const std::string& var) {
    gates_.push_back({Gate::Op::Input, -1, -1, var, false});
    return output_ = static_cast<int>(gates_.size()) - 1;
}

int Circuit::add_const(bool value) {
    gates_.push_back({Gate::Op::Const, -1, -1, "", value});
    return output_ = static_cast<int>(gates_.size()) - 1;
}

int Circuit::add_not(int a) {
    gates_.push_back({Gate::Op::Not, check(a), -1, "", false});
    return output_ = static_cast<int>(gates_.size()) - 1;
}

int Circuit::add_and(int a, int b) {
    gates_.push_back({Gate::Op::And, check(a), check(b), "", false});
    return output_ = static_cast<int>(gates_.size()) - 1;
}

int Circuit::add_or(int a, int b) {
    gates_.push_back({Gate::Op::Or, check(a), check(b), "", false});
    return output_ = static_cast<int>(gates_.size()) - 1;
}

int Circuit::gate_depth(int g) const {
    std::vector<int> depth(gates_.size(), 0);
    for (int i = 0; i <= g; ++i) {
        const Gate& gate = gates_[i];
        switch (gate.op) {
            case Gate::Op::Input:
            case Gate::Op::Const: depth[i] = 0; break;
            case Gate::Op::Not: depth[i] = depth[gate.a]; break;
            case Gate::Op::And:
            case Gate::Op::Or: depth[i] = 1 + std::max(depth[gate.a], depth[gate.b]); break;
        }
    }
    return depth[g];
}

int Circuit::depth() const { return gate_depth(check(output_)); }

bool Circuit::eval(const Assignment& phi) const {
    std::vector<char> value(gates_.size(), 0);
    for (std::size_t i = 0; i < gates_.size(); ++i) {
        const Gate& gate = gates_[i];
        switch (gate.op) {
            case Gate::Op::Input: value[i] = phi.at(gate.var) < 0; break;
            case Gate::Op::Const: value[i] = gate.value; break;
            case Gate::Op::Not: value[i] = !value[gate.a]; break;
            case Gate::Op::And: value[i] = value[gate.a] && value[gate.b]; break;
            case Gate::Op::Or: value[i] = value[gate.a] || value[gate.b]; break;
        }
    }
    return value[check(output_)];
}

VarList Circuit::input_variables() const {
    VarList out;
    for (const auto& gate : gates_)
        if (gate.op == Gate::Op::Input &&
            std::find(out.begin(), out.end(), gate.var) == out.end())
            out.push_back(gate.var);
    return out;
}

namespace {

// Balanced fold of gate indices with a binary combiner.
template <typename F>
int balanced_tree(Circuit& c, std::vector<int> nodes, F combine) {
    while (nodes.size() > 1) {
        std::vector<int> next;
        for (std::size_t i = 0; i + 1 < nodes.size(); i += 2)
            next.push_back(combine(c, nodes[i], nodes[i + 1]));
        if (nodes.size() % 2 == 1) next.push_back(nodes.back());
        nodes = std::move(next);
    }
    return nodes[0];
}

}  // namespace

Circuit circuit_from_constraint(const Constraint& c, const Limits& limits) {
    Circuit circuit;
    const VarList& ctx = c.context();
    auto rows = c.enumerate_satisfying_signs(limits);
    if (rows.empty()) throw NoSatisfyingAssignment("constraint has no satisfying assignment");

    if (Int(rows.size()) == (Int(1) << ctx.size())) {
        circuit.set_output(circuit.add_const(true));
        return circuit;
    }

    std::vector<int> inputs;
    for (const auto& v : ctx) inputs.push_back(circuit.add_input(v));

    std::vector<int> minterms;
    for (const auto& row : rows) {
        std::vector<int> literals;
        for (std::size_t k = 0; k < row.size(); ++k)
            literals.push_back(row[k] < 0 ? inputs[k] : circuit.add_not(inputs[k]));
        minterms.push_back(balanced_tree(circuit, literals, [](Circuit& cc, int a, int b) {
            return cc.add_and(a, b);
        }));
    }
    int out = balanced_tree(circuit, minterms,
                            [](Circuit& cc, int a, int b) { return cc.add_or(a, b); });
    circuit.set_output(out);
    return circuit;
}

}  // namespace bcszk
