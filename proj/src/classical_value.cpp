#include "bcszk/classical_value.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bcszk {

namespace {

// Precomputed win tables and integer question weights (numerators over a
// common denominator), so the search loops stay in integer arithmetic.
struct SearchTables {
    int m = 0;
    std::vector<std::vector<SignVec>> answers;         // per question
    std::vector<std::uint64_t> counts;                 // |C_i|
    std::vector<std::vector<std::vector<std::uint8_t>>> win;  // [i*m+j][a][b]
    std::vector<std::vector<Int>> weight_num;          // pi(i,j) * denom
    Int denom;
    bool weights_fit_i64 = false;
    std::vector<std::vector<long long>> weight_i64;
};

SearchTables build_tables(const Game& game, const Limits& limits) {
    SearchTables t;
    t.m = game.question_count();
    t.answers.resize(t.m);
    t.counts.resize(t.m);
    for (int i = 0; i < t.m; ++i) {
        auto rows = game.answers(i).enumerate_satisfying_signs(limits);
        if (rows.empty()) throw NoSatisfyingAssignment("question " + std::to_string(i + 1));
        t.counts[i] = rows.size();
        t.answers[i] = std::move(rows);
    }

    t.denom = 1;
    for (int i = 0; i < t.m; ++i)
        for (int j = 0; j < t.m; ++j)
            mpz_lcm(t.denom.get_mpz_t(), t.denom.get_mpz_t(),
                    game.pi().weight(i, j).get_den().get_mpz_t());
    t.weight_num.assign(t.m, std::vector<Int>(t.m));
    for (int i = 0; i < t.m; ++i)
        for (int j = 0; j < t.m; ++j) {
            Rat w = game.pi().weight(i, j);
            t.weight_num[i][j] = w.get_num() * (t.denom / w.get_den());
        }

    // Sum of all numerators equals denom; the search accumulates at most that,
    // so an int64 check on denom suffices for the fast path.
    t.weights_fit_i64 = t.denom.fits_slong_p();
    if (t.weights_fit_i64) {
        t.weight_i64.assign(t.m, std::vector<long long>(t.m));
        for (int i = 0; i < t.m; ++i)
            for (int j = 0; j < t.m; ++j) t.weight_i64[i][j] = t.weight_num[i][j].get_si();
    }

    t.win.resize(static_cast<std::size_t>(t.m) * t.m);
    for (int i = 0; i < t.m; ++i) {
        const VarList& vi = game.bcs().context(i);
        for (int j = 0; j < t.m; ++j) {
            const VarList& shared = game.intersection(i, j);
            std::vector<int> pos_i, pos_j;
            for (const auto& v : shared) {
                const VarList& vj = game.bcs().context(j);
                pos_i.push_back(static_cast<int>(
                    std::find(vi.begin(), vi.end(), v) - vi.begin()));
                pos_j.push_back(static_cast<int>(
                    std::find(vj.begin(), vj.end(), v) - vj.begin()));
            }
            auto& table = t.win[static_cast<std::size_t>(i) * t.m + j];
            table.assign(t.counts[i], std::vector<std::uint8_t>(t.counts[j], 0));
            for (std::size_t a = 0; a < t.counts[i]; ++a)
                for (std::size_t b = 0; b < t.counts[j]; ++b) {
                    bool ok = true;
                    for (std::size_t s = 0; s < shared.size(); ++s)
                        if (t.answers[i][a][pos_i[s]] != t.answers[j][b][pos_j[s]]) {
                            ok = false;
                            break;
                        }
                    table[a][b] = ok ? 1 : 0;
                }
        }
    }
    return t;
}

std::uint64_t strategy_space(const SearchTables& t, const Limits& limits) {
    std::uint64_t total = 1;
    for (auto c : t.counts) {
        if (total > limits.search_bound / std::max<std::uint64_t>(c, 1))
            throw TooLarge("deterministic strategy space exceeds the search bound");
        total *= c;
    }
    return total;
}

void ordinal_to_tuple(std::uint64_t ordinal, const std::vector<std::uint64_t>& counts,
                      std::vector<std::uint32_t>& out) {
    out.resize(counts.size());
    for (std::size_t i = counts.size(); i-- > 0;) {
        out[i] = static_cast<std::uint32_t>(ordinal % counts[i]);
        ordinal /= counts[i];
    }
}

DeterministicStrategy tuple_to_strategy(const Game& game, const SearchTables& t,
                                        const std::vector<std::uint32_t>& tuple) {
    DeterministicStrategy s;
    for (int i = 0; i < t.m; ++i)
        s.answer.push_back(Assignment(game.bcs().context(i), t.answers[i][tuple[i]]));
    return s;
}

}  // namespace

Rat classical_value_serial(const Game& game, const Limits& limits) {
    SearchTables t = build_tables(game, limits);
    std::uint64_t space = strategy_space(t, limits);
    if (space > limits.search_bound / space)
        throw TooLarge("pair search space " + std::to_string(space) + "^2 exceeds the bound");

    std::vector<std::vector<std::uint32_t>> tuples(space);
    for (std::uint64_t a = 0; a < space; ++a) ordinal_to_tuple(a, t.counts, tuples[a]);

    Int best = -1;
    if (t.weights_fit_i64) {
        long long best_i64 = -1;
        for (std::uint64_t a = 0; a < space; ++a)
            for (std::uint64_t b = 0; b < space; ++b) {
                long long score = 0;
                for (int i = 0; i < t.m; ++i)
                    for (int j = 0; j < t.m; ++j)
                        if (t.win[static_cast<std::size_t>(i) * t.m + j][tuples[a][i]]
                                 [tuples[b][j]])
                            score += t.weight_i64[i][j];
                if (score > best_i64) best_i64 = score;
            }
        best = static_cast<long>(best_i64);
    } else {
        for (std::uint64_t a = 0; a < space; ++a)
            for (std::uint64_t b = 0; b < space; ++b) {
                Int score = 0;
                for (int i = 0; i < t.m; ++i)
                    for (int j = 0; j < t.m; ++j)
                        if (t.win[static_cast<std::size_t>(i) * t.m + j][tuples[a][i]]
                                 [tuples[b][j]])
                            score += t.weight_num[i][j];
                if (score > best) best = score;
            }
    }
    Rat value(best, t.denom);
    value.canonicalize();
    return value;
}

namespace {

// Best-response score of the row tuple: for each column question j the
// column player picks its best answer independently.
template <typename WeightT, typename AccT>
AccT best_response_score(const SearchTables& t, const std::vector<std::uint32_t>& a_tuple,
                         const std::vector<std::vector<WeightT>>& weights,
                         std::vector<std::uint32_t>* best_answers) {
    AccT total = 0;
    for (int j = 0; j < t.m; ++j) {
        AccT best = -1;
        std::uint32_t best_b = 0;
        for (std::uint32_t b = 0; b < t.counts[j]; ++b) {
            AccT score = 0;
            for (int i = 0; i < t.m; ++i)
                if (t.win[static_cast<std::size_t>(i) * t.m + j][a_tuple[i]][b])
                    score += weights[i][j];
            if (score > best) {
                best = score;
                best_b = b;
            }
        }
        total += best;
        if (best_answers) (*best_answers)[j] = best_b;
    }
    return total;
}

}  // namespace

ValueWitness classical_value_witness(const Game& game, const Limits& limits) {
    SearchTables t = build_tables(game, limits);
    std::uint64_t space = strategy_space(t, limits);

    std::uint64_t best_ordinal = 0;
    Int best_score = -1;

    if (t.weights_fit_i64) {
        long long global_best = -1;
        std::uint64_t global_ordinal = 0;
#ifdef _OPENMP
#pragma omp parallel
#endif
        {
            long long local_best = -1;
            std::uint64_t local_ordinal = 0;
            std::vector<std::uint32_t> a_tuple;
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
            for (long long a = 0; a < static_cast<long long>(space); ++a) {
                ordinal_to_tuple(static_cast<std::uint64_t>(a), t.counts, a_tuple);
                long long score = best_response_score<long long, long long>(
                    t, a_tuple, t.weight_i64, nullptr);
                if (score > local_best ||
                    (score == local_best && static_cast<std::uint64_t>(a) < local_ordinal)) {
                    local_best = score;
                    local_ordinal = static_cast<std::uint64_t>(a);
                }
            }
#ifdef _OPENMP
#pragma omp critical
#endif
            {
                if (local_best > global_best ||
                    (local_best == global_best && local_ordinal < global_ordinal)) {
                    global_best = local_best;
                    global_ordinal = local_ordinal;
                }
            }
        }
        best_score = static_cast<long>(global_best);
        best_ordinal = global_ordinal;
    } else {
        std::vector<std::uint32_t> a_tuple;
        for (std::uint64_t a = 0; a < space; ++a) {
            ordinal_to_tuple(a, t.counts, a_tuple);
            Int score = best_response_score<Int, Int>(t, a_tuple, t.weight_num, nullptr);
            if (score > best_score) {
                best_score = score;
                best_ordinal = a;
            }
        }
    }

    ValueWitness w;
    w.value = Rat(best_score, t.denom);
    w.value.canonicalize();
    std::vector<std::uint32_t> a_tuple;
    ordinal_to_tuple(best_ordinal, t.counts, a_tuple);
    std::vector<std::uint32_t> b_tuple(t.m);
    best_response_score<Int, Int>(t, a_tuple, t.weight_num, &b_tuple);
    w.row_player = tuple_to_strategy(game, t, a_tuple);
    w.column_player = tuple_to_strategy(game, t, b_tuple);
    return w;
}

Rat classical_value(const Game& game, const Limits& limits) {
    return classical_value_witness(game, limits).value;
}

}  // namespace bcszk
