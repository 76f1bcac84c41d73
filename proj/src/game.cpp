#include "bcszk/game.hpp"

namespace bcszk {

Game::Game(Bcs bcs, QuestionDistribution pi) : bcs_(std::move(bcs)), pi_(std::move(pi)) {
    bcs_.validate();
    if (pi_.size() != bcs_.m())
        throw DimensionMismatch("distribution size " + std::to_string(pi_.size()) +
                                " does not match constraint count " + std::to_string(bcs_.m()));
}

Game build_game(Bcs b, QuestionDistribution pi) { return Game(std::move(b), std::move(pi)); }

bool Game::win(const Assignment& phi, const Assignment& psi, int i, int j) const {
    if (i < 0 || j < 0 || i >= bcs_.m() || j >= bcs_.m()) return false;
    if (!bcs_.constraint(i).accepts(phi)) return false;
    if (!bcs_.constraint(j).accepts(psi)) return false;
    return phi.agrees_on(psi, intersection(i, j));
}

const VarList& Game::intersection(int i, int j) const {
    auto key = std::make_pair(i, j);
    auto it = intersections_.find(key);
    if (it == intersections_.end())
        it = intersections_.emplace(key, context_intersection(bcs_.context(i), bcs_.context(j)))
                 .first;
    return it->second;
}

namespace {

template <typename P>
P winning_probability_impl(const Game& game, const BasicCorrelation<P>& p) {
    P omega{};
    int m = game.question_count();
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            Rat weight = game.pi().weight(i, j);
            if (weight == 0) continue;
            auto it = p.tables.find({i, j});
            if (it == p.tables.end())
                throw MissingTable("no correlation table for pair (" + std::to_string(i + 1) +
                                   "," + std::to_string(j + 1) + ")");
            P pair_value{};
            const VarList& ctx_i = game.bcs().context(i);
            const VarList& ctx_j = game.bcs().context(j);
            for (const auto& [answers, prob] : it->second) {
                Assignment phi = Assignment::from_sign_string(ctx_i, answers.first);
                Assignment psi = Assignment::from_sign_string(ctx_j, answers.second);
                if (game.win(phi, psi, i, j)) pair_value += prob;
            }
            if constexpr (std::is_same_v<P, Rat>) {
                omega += weight * pair_value;
            } else {
                omega += rat_to_double(weight) * pair_value;
            }
        }
    }
    return omega;
}

}  // namespace

Rat winning_probability(const Game& game, const Correlation& p) {
    return winning_probability_impl(game, p);
}

double winning_probability(const Game& game, const FloatCorrelation& p) {
    return winning_probability_impl(game, p);
}

}  // namespace bcszk
