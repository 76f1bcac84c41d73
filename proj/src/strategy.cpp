#include "bcszk/strategy.hpp"

namespace bcszk {

void DeterministicStrategy::validate(const Game& game) const {
    if (static_cast<int>(answer.size()) != game.question_count())
        throw DimensionMismatch("strategy answers " + std::to_string(answer.size()) +
                                " questions, game has " +
                                std::to_string(game.question_count()));
    for (int i = 0; i < game.question_count(); ++i)
        if (!game.answers(i).accepts(answer[i]))
            throw NotSatisfying("answer to question " + std::to_string(i + 1) +
                                " does not satisfy its constraint");
}

DeterministicStrategy strategy_from_assignment(const Bcs& b, const Assignment& phi_star) {
    if (!b.satisfied_by(phi_star)) throw NotSatisfying("assignment does not satisfy the system");
    DeterministicStrategy s;
    s.answer.reserve(b.m());
    for (int i = 0; i < b.m(); ++i) s.answer.push_back(phi_star.restrict_to(b.context(i)));
    return s;
}

Correlation correlation_from_deterministic(const Game& game, const DeterministicStrategy& a,
                                           const DeterministicStrategy& b) {
    a.validate(game);
    b.validate(game);
    Correlation p;
    int m = game.question_count();
    for (int i = 0; i < m; ++i) {
        std::string phi = a.answer[i].sign_string(game.bcs().context(i));
        for (int j = 0; j < m; ++j) {
            std::string psi = b.answer[j].sign_string(game.bcs().context(j));
            p.tables[{i, j}][{phi, psi}] = Rat(1);
        }
    }
    return p;
}

void SharedRandomnessStrategy::validate(const Game& game, const Int& limit) const {
    for (Int seed = 0; seed < limit && seed < seed_count; ++seed)
        for (int i = 0; i < game.question_count(); ++i)
            if (!game.answers(i).accepts(answer(seed, i)))
                throw NotSatisfying("seed " + seed.get_str() + " induces an invalid answer");
}

Correlation correlation_from_shared_randomness(const Game& game,
                                               const SharedRandomnessStrategy& s,
                                               std::uint64_t max_seeds) {
    if (s.seed_count > Int(max_seeds))
        throw TooLarge("seed space of size " + s.seed_count.get_str());
    Correlation p;
    Rat share(1);
    share /= Rat(s.seed_count);
    int m = game.question_count();
    for (Int seed = 0; seed < s.seed_count; ++seed) {
        std::vector<std::string> keys(m);
        for (int i = 0; i < m; ++i)
            keys[i] = s.answer(seed, i).sign_string(game.bcs().context(i));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) p.tables[{i, j}][{keys[i], keys[j]}] += share;
    }
    return p;
}

}  // namespace bcszk
