#pragma once

#include "bcszk/compiled_game.hpp"

namespace bcszk::testsupport {

// Tiny pipelines used across the oracle and simulator tests.

// Two single-variable constraints sharing x, depth-1 hand programs, no
// obliviation: every window cone is randomizer-free.
inline CompiledGame pair_game_depth1() {
    Bcs b;
    b.variables = {"x"};
    b.constraints.push_back(Constraint::unit({"x"}, "x", -1));
    b.constraints.push_back(Constraint::unit({"x"}, "x", +1));
    Pbp pin_true;
    pin_true.sigma = pinned_cycles().sigma_default;
    pin_true.instructions.push_back({"x", Perm5::identity(), pin_true.sigma});
    Pbp pin_false;
    pin_false.sigma = pinned_cycles().sigma_default;
    pin_false.instructions.push_back({"x", pin_false.sigma, Perm5::identity()});
    return compile_pipeline(b, QuestionDistribution::uniform(2), 1, {pin_true, pin_false});
}

// One two-variable constraint with a depth-2 program reading x twice: three
// randomizers, conjugation chains, a 120-tuple product window.
inline CompiledGame single_game_depth2() {
    Bcs b;
    b.variables = {"x", "y"};
    b.constraints.push_back(Constraint::unit({"x", "y"}, "x", -1));
    Perm5 sigma = pinned_cycles().sigma_default;
    Perm5 rho = Perm5::from_cycle({1, 3, 2, 4, 5});
    Pbp p;
    p.sigma = sigma;
    p.instructions.push_back({"x", rho, sigma * rho});
    p.instructions.push_back({"x", rho.inverse(), rho.inverse()});
    std::vector<std::vector<Rat>> w = {{make_rat(1)}};
    return compile_pipeline(b, QuestionDistribution::dense(w), 1, {p});
}

// Degree-5 obliviation of a single pinned variable; the lifted program has
// depth 9. This is the smallest game where the honest correlation matches
// the simulated one.
inline CompiledGame obliviated_game_degree5() {
    Bcs b;
    b.variables = {"x"};
    b.constraints.push_back(Constraint::unit({"x"}, "x", -1));
    return compile_pipeline(b, QuestionDistribution::uniform(1), 5, {});
}

// Deterministic stratified pair list: for each (type, type, same-constraint)
// combination present, up to `per_stratum` pairs in index order.
inline std::vector<std::pair<int, int>> stratified_pairs(const CompiledGame& g,
                                                         int per_stratum) {
    std::map<std::tuple<int, int, bool>, int> taken;
    std::vector<std::pair<int, int>> out;
    int M = g.question_count();
    for (int a = 0; a < M; ++a) {
        auto [ia, ja] = g.question_to_window(a);
        int ta = g.tableau().window(ia, ja).type;
        for (int b = a; b < M; ++b) {
            auto [ib, jb] = g.question_to_window(b);
            int tb = g.tableau().window(ib, jb).type;
            auto key = std::make_tuple(std::min(ta, tb), std::max(ta, tb), ia == ib);
            if (taken[key] >= per_stratum) continue;
            ++taken[key];
            out.push_back({a, b});
        }
    }
    return out;
}

}  // namespace bcszk::testsupport
