#pragma once

#include <concepts>
#include <map>
#include <utility>

#include "bcszk/bcs.hpp"
#include "bcszk/distribution.hpp"

namespace bcszk {

// The nonlocal game built from a BCS and a question distribution. Questions
// are constraint indices; the answer set of question i is the satisfying set
// C_i; answers agree-on-intersection to win. Players may answer outside C_i,
// but such answers always lose.
class Game {
  public:
    Game(Bcs bcs, QuestionDistribution pi);

    const Bcs& bcs() const { return bcs_; }
    const QuestionDistribution& pi() const { return pi_; }
    int question_count() const { return bcs_.m(); }

    const Constraint& answers(int i) const { return bcs_.constraint(i); }

    // Winning predicate. Total: malformed or non-satisfying answers lose,
    // they never raise.
    bool win(const Assignment& phi, const Assignment& psi, int i, int j) const;

    // Ordered intersection V_i cap V_j (cached).
    const VarList& intersection(int i, int j) const;

  private:
    Bcs bcs_;
    QuestionDistribution pi_;
    mutable std::map<std::pair<int, int>, VarList> intersections_;
};

Game build_game(Bcs b, QuestionDistribution pi);

// Anything with questions, answer sets and a win predicate. Lets the
// synchronicity check run against hand-built tables too.
template <typename G>
concept GameLike = requires(const G& g, int i, const Assignment& a, const Assignment& b) {
    { g.question_count() } -> std::convertible_to<int>;
    { g.answers(i) } -> std::convertible_to<const Constraint&>;
    { g.win(a, b, i, i) } -> std::convertible_to<bool>;
};

// True iff equal questions force equal answers: V(a,b|i,i) = 0 for a != b.
// Every BCS game passes, since answers to question i must agree on all of
// V_i. Enumerates answer sets, so the usual bounds apply.
template <GameLike G>
bool is_synchronous_game(const G& game, const Limits& limits = default_limits()) {
    for (int i = 0; i < game.question_count(); ++i) {
        auto answers = game.answers(i).enumerate_satisfying(limits);
        for (std::size_t a = 0; a < answers.size(); ++a)
            for (std::size_t b = 0; b < answers.size(); ++b)
                if (a != b && game.win(answers[a], answers[b], i, i)) return false;
    }
    return true;
}

// A correlation: per question pair, a distribution over answer pairs keyed
// by sign strings in context order. Sparse: pairs with pi = 0 may be absent.
// P is Rat for exact correlations and double for quantum-evaluated ones.
template <typename P>
struct BasicCorrelation {
    using Table = std::map<std::pair<std::string, std::string>, P>;
    std::map<std::pair<int, int>, Table> tables;

    bool has_pair(int i, int j) const { return tables.count({i, j}) != 0; }
};

using Correlation = BasicCorrelation<Rat>;
using FloatCorrelation = BasicCorrelation<double>;

// omega(G; p) = sum pi(i,j) V(a,b|i,j) p(a,b|i,j). Exact for Rat tables.
// Throws MissingTable when a pair with positive weight has no table.
Rat winning_probability(const Game& game, const Correlation& p);
double winning_probability(const Game& game, const FloatCorrelation& p);

}  // namespace bcszk
