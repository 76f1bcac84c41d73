#include "bcszk/pbp.hpp"

#include <json.hpp>

namespace bcszk {

Perm5 eval_pbp(const Pbp& p, const Assignment& phi) {
    Perm5 acc = Perm5::identity();
    for (const auto& inst : p.instructions) {
        auto value = phi.get(inst.var);
        if (!value) throw UnboundVariable(inst.var);
        acc = acc * (*value < 0 ? inst.on_minus : inst.on_plus);
    }
    return acc;
}

namespace {

using Program = std::vector<PbpInstruction>;

// Right-multiplies the program's value by a constant. Folds into the last
// instruction when possible; an empty program needs a carrier instruction.
void append_const(Program& prog, const Perm5& c, const std::string& anchor) {
    if (c.is_identity()) return;
    if (prog.empty()) {
        prog.push_back({anchor, c, c});
        return;
    }
    prog.back().on_plus = prog.back().on_plus * c;
    prog.back().on_minus = prog.back().on_minus * c;
}

struct Compiler {
    const Circuit& circuit;
    std::string anchor;
    std::uint64_t budget;

    // Program evaluating to sigma when gate `g` is true and to the identity
    // otherwise. sigma must be a 5-cycle.
    Program emit(int g, const Perm5& sigma) {
        if (budget == 0) throw TooLarge("compiled program exceeds the length budget");
        const Circuit::Gate& gate = circuit.gate(g);
        using Op = Circuit::Gate::Op;
        switch (gate.op) {
            case Op::Input: return {{gate.var, Perm5::identity(), sigma}};
            case Op::Const: {
                Program prog;
                if (gate.value) prog.push_back({anchor, sigma, sigma});
                return prog;
            }
            case Op::Not: {
                Program prog = emit(gate.a, sigma.inverse());
                append_const(prog, sigma, anchor);
                return prog;
            }
            case Op::And: return emit_and(gate.a, gate.b, sigma, false, false);
            case Op::Or:
                // a or b = not(not a and not b)
                {
                    Program prog = emit_and(gate.a, gate.b, sigma.inverse(), true, true);
                    append_const(prog, sigma, anchor);
                    return prog;
                }
        }
        throw DomainMismatch("unknown gate");
    }

    Program emit_and(int a, int b, const Perm5& sigma, bool negate_a, bool negate_b) {
        // Pick 5-cycles with [alpha, beta] = sigma by conjugating the pinned
        // base pair.
        const PinnedCycles& pinned = pinned_cycles();
        Perm5 theta = conjugator_between(pinned.rho0, sigma);
        Perm5 alpha = conjugate(pinned.alpha0, theta);
        Perm5 beta = conjugate(pinned.beta0, theta);

        Program pa = emit_literal(a, alpha, negate_a);
        Program pb = emit_literal(b, beta, negate_b);
        Program pa_inv = emit_literal(a, alpha.inverse(), negate_a);
        Program pb_inv = emit_literal(b, beta.inverse(), negate_b);

        Program prog;
        prog.reserve(pa.size() + pb.size() + pa_inv.size() + pb_inv.size());
        for (auto* part : {&pa, &pb, &pa_inv, &pb_inv})
            prog.insert(prog.end(), part->begin(), part->end());
        if (prog.size() > budget) throw TooLarge("compiled program exceeds the length budget");
        return prog;
    }

    Program emit_literal(int g, const Perm5& sigma, bool negated) {
        if (!negated) return emit(g, sigma);
        Program prog = emit(g, sigma.inverse());
        append_const(prog, sigma, anchor);
        return prog;
    }
};

}  // namespace

Pbp compile(const Circuit& c, std::optional<Perm5> sigma, const Limits& limits,
            std::optional<std::string> anchor) {
    Perm5 target = sigma.value_or(pinned_cycles().sigma_default);
    if (!target.is_five_cycle()) throw DomainMismatch("compile target must be a 5-cycle");

    // Projected lengths: 1 for leaves, 2L(a)+2L(b) for And/Or (De Morgan's
    // Nots are free). Saturating, so oversized circuits fail before any
    // program is materialized.
    const std::uint64_t cap = limits.search_bound;
    std::vector<std::uint64_t> length(c.gates().size(), 1);
    for (std::size_t g = 0; g < c.gates().size(); ++g) {
        const auto& gate = c.gate(static_cast<int>(g));
        using Op = Circuit::Gate::Op;
        if (gate.op == Op::Not) {
            length[g] = length[gate.a];
        } else if (gate.op == Op::And || gate.op == Op::Or) {
            std::uint64_t la = length[gate.a], lb = length[gate.b];
            length[g] = (la > cap / 2 || lb > cap / 2 || 2 * la > cap - 2 * lb)
                            ? cap + 1
                            : 2 * la + 2 * lb;
            if (length[g] > cap)
                throw TooLarge("compiled program length would exceed the budget");
        }
    }
    if (length[c.output()] > cap)
        throw TooLarge("compiled program length would exceed the budget");

    VarList inputs = c.input_variables();
    std::string carrier = anchor.value_or(inputs.empty() ? "_" : inputs.front());
    Compiler compiler{c, carrier, limits.search_bound};
    Pbp p;
    p.sigma = target;
    p.instructions = compiler.emit(c.output(), target);
    return p;
}

Pbp compile_constraint(const Constraint& c, std::optional<Perm5> sigma, const Limits& limits) {
    return compile(circuit_from_constraint(c, limits), sigma, limits, c.context().front());
}

bool recognizes(const Pbp& p, const Constraint& c, const Limits& limits) {
    if (!p.sigma.is_five_cycle()) return false;
    int k = c.arity();
    if (k > limits.enumeration_bound_vars)
        throw TooLarge("recognition check over " + std::to_string(k) + " variables");
    const VarList& ctx = c.context();
    for (const auto& inst : p.instructions)
        if (std::find(ctx.begin(), ctx.end(), inst.var) == ctx.end())
            throw UnboundVariable(inst.var + " is not in the constraint context");
    for (std::uint64_t o = 0; o < (1ULL << k); ++o) {
        SignVec signs = signvec_from_ordinal(o, k);
        Perm5 value = eval_pbp(p, Assignment(ctx, signs));
        if (c.contains_signs(signs)) {
            if (value != p.sigma) return false;
        } else {
            if (!value.is_identity()) return false;
        }
    }
    return true;
}

Pbp lift_pbp(const Pbp& p, int degree,
             const std::function<std::string(const std::string&, int)>& share_name) {
    if (degree < 1) throw DomainMismatch("lift degree must be >= 1");
    Pbp lifted;
    lifted.sigma = p.sigma;
    for (const auto& inst : p.instructions) {
        Perm5 delta = inst.on_minus * inst.on_plus.inverse();
        if (delta.is_identity()) {
            // The instruction ignores the variable's value; one share carries it.
            lifted.instructions.push_back({share_name(inst.var, 1), inst.on_plus, inst.on_plus});
            continue;
        }
        // Share-parity gadget: value delta^[share parity is -1], built by
        // wrapping the single-share program with conjugation flips
        // (theta * delta * theta^-1 = delta^-1).
        Perm5 theta = conjugator_between(delta, delta.inverse());
        Program gadget = {{share_name(inst.var, 1), Perm5::identity(), delta}};
        for (int k = 2; k <= degree; ++k) {
            Program wrapped;
            wrapped.push_back({share_name(inst.var, k), Perm5::identity(), delta * theta});
            wrapped.insert(wrapped.end(), gadget.begin(), gadget.end());
            wrapped.push_back({share_name(inst.var, k), Perm5::identity(), theta.inverse()});
            gadget = std::move(wrapped);
        }
        append_const(gadget, inst.on_plus, share_name(inst.var, 1));
        lifted.instructions.insert(lifted.instructions.end(), gadget.begin(), gadget.end());
    }
    return lifted;
}

std::string pbp_to_json_string(const Pbp& p) {
    nlohmann::json doc;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& inst : p.instructions)
        rows.push_back({inst.var, inst.on_plus.one_line(), inst.on_minus.one_line()});
    doc["instructions"] = rows;
    doc["sigma"] = p.sigma.one_line();
    return doc.dump();
}

Pbp pbp_from_json_string(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("invalid pbp JSON: ") + e.what());
    }
    Pbp p;
    if (!doc.contains("sigma") || !doc.contains("instructions"))
        throw FormatError("pbp document needs 'sigma' and 'instructions'");
    p.sigma = Perm5::from_one_line(doc["sigma"].get<std::string>());
    for (const auto& row : doc["instructions"]) {
        if (!row.is_array() || row.size() != 3) throw FormatError("pbp instruction is [var,+,-]");
        p.instructions.push_back({row[0].get<std::string>(),
                                  Perm5::from_one_line(row[1].get<std::string>()),
                                  Perm5::from_one_line(row[2].get<std::string>())});
    }
    return p;
}

}  // namespace bcszk
