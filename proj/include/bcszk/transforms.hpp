#pragma once

#include "bcszk/circuit.hpp"
#include "bcszk/game.hpp"
#include "bcszk/strategy.hpp"

namespace bcszk {

// --- obliviation --------------------------------------------------------

// Copy k (1-based) of a variable under obliviation; also used for the share
// tapes handed to lift.
std::string share_variable_name(const std::string& var, int copy);

// Replaces every variable by `degree` shares whose product recovers it;
// constraint membership goes through the share products.
Bcs obliviate(const Bcs& b, int degree);

// The lift phi_y: share 1 carries phi(x)*y(x,1), middle shares carry
// consecutive tape products, the last share carries y(x,degree-1). `y` binds
// share_variable_name(x, 1..degree-1) for every x in b's variables.
Assignment obliviation_lift(const Bcs& b, int degree, const Assignment& phi,
                            const Assignment& y);

// Share products: the inverse of lift on its image.
Assignment obliviation_project(const Bcs& b, int degree, const Assignment& psi);

// --- subdivision --------------------------------------------------------

// Per constraint, the clause list (V_ij, D_ij). Valid when every clause
// context sits inside V_i, every variable pair of V_i shares some clause,
// and the conjunction of the clauses is exactly C_i.
struct SubdivisionPlan {
    std::vector<std::vector<Constraint>> clauses;  // indexed by constraint

    // Throws PlanInvalid naming the violated condition. The conjunction
    // check is exhaustive within the enumeration bound and sample-based
    // beyond it.
    void validate(const Bcs& b, const Limits& limits = default_limits()) const;
};

std::pair<Bcs, QuestionDistribution> subdivide(const Bcs& b, const SubdivisionPlan& plan,
                                               const QuestionDistribution& pi,
                                               const Limits& limits = default_limits());

// The plan implied by the constraint bodies: 3SAT constraints split into
// their clauses (plus tautological pair clauses for coverage), product
// constraints into factors, everything else into a single whole-context
// clause.
SubdivisionPlan natural_subdivision_plan(const Bcs& b, const Limits& limits = default_limits());

// --- parallel repetition ------------------------------------------------

std::string repeat_variable_name(const std::string& var, int copy);

// n-fold repetition: questions are [m]^n tuples in lexicographic order,
// contexts concatenate per-copy contexts, answers multiply out.
std::pair<Bcs, QuestionDistribution> parallel_repeat(const Bcs& b,
                                                     const QuestionDistribution& pi, int n,
                                                     const Limits& limits = default_limits());

// Flat index of a question tuple in the repeated game.
int repeated_question_index(int m, const std::vector<int>& tuple);

// Entrywise product correlation for the n-fold repetition of `base`.
Correlation product_correlation(const Game& base, const Correlation& p, int n,
                                const Limits& limits = default_limits());

// --- oracularization and synchronous-game conversion ---------------------

// Output questions: the m originals, then one per ordered question pair with
// positive weight. Pair answers are winning answer pairs; weights follow the
// 1/8 (cross) and 1/2 (pair-diagonal) table, accumulated when cases
// coincide (i = j).
std::pair<Bcs, QuestionDistribution> oracularize(const Game& g,
                                                 const Limits& limits = default_limits());

// Indicator-variable system of a synchronous game: one boolean per
// (question, answer), an at-least-one constraint per question, and a
// not-both constraint per losing pair.
Bcs sync_game_to_bcs(const Game& g, const Limits& limits = default_limits());

// --- classical homomorphisms ---------------------------------------------

// A classical homomorphism from `source` to `target` (the algebra
// direction), represented by its per-constraint answer maps f_i sending
// target answers to source answers; inconsistent pairs must map to
// inconsistent pairs. Strategies transport against the arrow: a target
// strategy becomes a source strategy.
struct ClassicalHom {
    // Per constraint: sign string over target context -> sign string over
    // source context.
    std::vector<std::map<std::string, std::string>> answer_map;
};

// Checks map well-formedness and the inconsistency-preservation condition
// over all pairs of mapped answers. Throws HomInvalid.
void validate_classical_hom(const Bcs& source, const Bcs& target, const ClassicalHom& hom,
                            const Limits& limits = default_limits());

DeterministicStrategy transport_strategy(const Bcs& source, const Bcs& target,
                                         const ClassicalHom& hom,
                                         const DeterministicStrategy& s);

// The projection homomorphism for obliviation (source b, target its
// obliviated system); requires enumerable share contexts.
ClassicalHom obliviation_hom(const Bcs& b, int degree,
                             const Limits& limits = default_limits());

// --- 3SAT rewriting -------------------------------------------------------

struct To3SatResult {
    Bcs system;              // contexts extended with per-context auxiliaries
    ClassicalHom projection;  // source original, target 3SAT system
    ClassicalHom extension;   // source 3SAT system, target original
};

// Rewrites every constraint as a conjunction of 3SAT clauses over its
// context plus fresh auxiliaries ("aux:i:k"), via Tseitin over the
// minterm/OR-tree indicator circuit. Contexts pairwise intersect exactly as
// before.
To3SatResult to_3sat(const Bcs& b, const Limits& limits = default_limits());

}  // namespace bcszk
