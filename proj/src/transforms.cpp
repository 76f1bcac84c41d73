#include "bcszk/transforms.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace bcszk {

// --- obliviation --------------------------------------------------------

std::string share_variable_name(const std::string& var, int copy) {
    return var + "(" + std::to_string(copy) + ")";
}

Bcs obliviate(const Bcs& b, int degree) {
    if (degree < 1) throw DomainMismatch("obliviation degree must be >= 1");
    b.validate();
    Bcs out;
    for (const auto& x : b.variables)
        for (int c = 1; c <= degree; ++c) out.variables.push_back(share_variable_name(x, c));
    for (int i = 0; i < b.m(); ++i) {
        VarList ctx;
        for (const auto& x : b.context(i))
            for (int c = 1; c <= degree; ++c) ctx.push_back(share_variable_name(x, c));
        out.constraints.push_back(
            Constraint(ctx, std::make_shared<ObliviatedBody>(b.constraint(i), degree)));
    }
    out.names = b.names;
    return out;
}

Assignment obliviation_lift(const Bcs& b, int degree, const Assignment& phi,
                            const Assignment& y) {
    if (!phi.binds_exactly(b.variables))
        throw DomainMismatch("lift input must bind exactly the base variables");
    Assignment out;
    for (const auto& x : b.variables) {
        auto tape = [&](int j) {
            auto v = y.get(share_variable_name(x, j));
            if (!v) throw DomainMismatch("share tape misses " + share_variable_name(x, j));
            return *v;
        };
        for (int c = 1; c <= degree; ++c) {
            Sign value;
            if (degree == 1) {
                value = phi.at(x);
            } else if (c == 1) {
                value = static_cast<Sign>(phi.at(x) * tape(1));
            } else if (c < degree) {
                value = static_cast<Sign>(tape(c - 1) * tape(c));
            } else {
                value = tape(degree - 1);
            }
            out.bind(share_variable_name(x, c), value);
        }
    }
    return out;
}

Assignment obliviation_project(const Bcs& b, int degree, const Assignment& psi) {
    Assignment out;
    for (const auto& x : b.variables) {
        int product = 1;
        for (int c = 1; c <= degree; ++c) {
            auto v = psi.get(share_variable_name(x, c));
            if (!v) throw DomainMismatch("missing share " + share_variable_name(x, c));
            product *= *v;
        }
        out.bind(x, static_cast<Sign>(product));
    }
    return out;
}

// --- subdivision --------------------------------------------------------

void SubdivisionPlan::validate(const Bcs& b, const Limits& limits) const {
    if (static_cast<int>(clauses.size()) != b.m())
        throw PlanInvalid("plan covers " + std::to_string(clauses.size()) + " constraints, not " +
                          std::to_string(b.m()));
    for (int i = 0; i < b.m(); ++i) {
        const VarList& ctx = b.context(i);
        if (clauses[i].empty())
            throw PlanInvalid("constraint " + std::to_string(i + 1) + " has no clauses");

        // (1) clause contexts inside V_i.
        for (const auto& clause : clauses[i])
            for (const auto& v : clause.context())
                if (std::find(ctx.begin(), ctx.end(), v) == ctx.end())
                    throw PlanInvalid("clause variable " + v + " is outside context " +
                                      std::to_string(i + 1));

        // (2) pair coverage, including every single variable.
        for (std::size_t a = 0; a < ctx.size(); ++a)
            for (std::size_t c = a; c < ctx.size(); ++c) {
                bool covered = false;
                for (const auto& clause : clauses[i]) {
                    const VarList& w = clause.context();
                    if (std::find(w.begin(), w.end(), ctx[a]) != w.end() &&
                        std::find(w.begin(), w.end(), ctx[c]) != w.end()) {
                        covered = true;
                        break;
                    }
                }
                if (!covered)
                    throw PlanInvalid("pair (" + ctx[a] + "," + ctx[c] +
                                      ") is not covered in constraint " + std::to_string(i + 1));
            }

        // (3) the conjunction of the clauses is exactly C_i.
        auto agree = [&](const SignVec& signs) {
            Assignment phi(ctx, signs);
            bool in_c = b.constraint(i).contains(phi);
            bool in_all = true;
            for (const auto& clause : clauses[i])
                if (!clause.contains(phi)) {
                    in_all = false;
                    break;
                }
            return in_c == in_all;
        };
        int k = static_cast<int>(ctx.size());
        if (k <= limits.enumeration_bound_vars) {
            for (std::uint64_t o = 0; o < (1ULL << k); ++o)
                if (!agree(signvec_from_ordinal(o, k)))
                    throw PlanInvalid("conjunction mismatch in constraint " +
                                      std::to_string(i + 1));
        } else {
            Rng rng(0x5d17ULL ^ static_cast<std::uint64_t>(i));
            for (int trial = 0; trial < 256; ++trial) {
                SignVec signs(k);
                if (trial % 2 == 0) {
                    for (auto& s : signs) s = rng.coin() ? Sign(-1) : Sign(+1);
                } else {
                    signs = b.constraint(i).sample_satisfying_signs(rng, limits);
                }
                if (!agree(signs))
                    throw PlanInvalid("conjunction mismatch in constraint " +
                                      std::to_string(i + 1) + " (sampled)");
            }
        }
    }
}

std::pair<Bcs, QuestionDistribution> subdivide(const Bcs& b, const SubdivisionPlan& plan,
                                               const QuestionDistribution& pi,
                                               const Limits& limits) {
    if (pi.size() != b.m()) throw DimensionMismatch("distribution does not match the system");
    plan.validate(b, limits);
    Bcs out;
    out.variables = b.variables;
    std::vector<int> counts;
    for (int i = 0; i < b.m(); ++i) {
        counts.push_back(static_cast<int>(plan.clauses[i].size()));
        for (std::size_t j = 0; j < plan.clauses[i].size(); ++j) {
            out.constraints.push_back(plan.clauses[i][j]);
            out.names.push_back(b.name(i) + "." + std::to_string(j + 1));
        }
    }
    return {std::move(out), QuestionDistribution::subdivided(pi, counts)};
}

SubdivisionPlan natural_subdivision_plan(const Bcs& b, const Limits& limits) {
    SubdivisionPlan plan;
    plan.clauses.resize(b.m());
    for (int i = 0; i < b.m(); ++i) {
        const Constraint& c = b.constraint(i);
        const VarList& ctx = c.context();
        const std::string kind = c.body().kind();
        auto& out = plan.clauses[i];

        auto tautology = [&](const std::string& u, const std::string& v) {
            // (u or !u or v): satisfied by everything, keeps the system 3SAT.
            VarList w;
            for (const auto& x : ctx)
                if (x == u || x == v) w.push_back(x);
            std::vector<Clause> cl = {{{0, true}, {0, false},
                                       {static_cast<int>(w.size()) - 1, true}}};
            return Constraint(w, std::make_shared<ThreeSatBody>(static_cast<int>(w.size()),
                                                                std::move(cl)));
        };

        if (kind == "3sat") {
            const auto& body = static_cast<const ThreeSatBody&>(c.body());
            std::set<std::pair<int, int>> covered;
            for (const auto& clause : body.clauses()) {
                std::set<int> vars;
                for (const auto& lit : clause) vars.insert(lit.var);
                VarList w;
                std::vector<int> positions(ctx.size(), -1);
                for (int v : vars) {
                    positions[v] = static_cast<int>(w.size());
                    w.push_back(ctx[v]);
                }
                Clause local;
                for (const auto& lit : clause) local.push_back({positions[lit.var], lit.positive});
                out.push_back(Constraint(
                    w, std::make_shared<ThreeSatBody>(static_cast<int>(w.size()),
                                                      std::vector<Clause>{local})));
                for (int u : vars)
                    for (int v : vars)
                        if (u <= v) covered.insert({u, v});
            }
            for (int u = 0; u < static_cast<int>(ctx.size()); ++u)
                for (int v = u; v < static_cast<int>(ctx.size()); ++v)
                    if (!covered.count({u, v})) out.push_back(tautology(ctx[u], ctx[v]));
        } else if (kind == "product") {
            const auto& body = static_cast<const ProductBody&>(c.body());
            std::size_t offset = 0;
            std::vector<std::pair<std::size_t, std::size_t>> ranges;
            for (const auto& f : body.factors()) {
                VarList w(ctx.begin() + offset, ctx.begin() + offset + f.arity());
                out.push_back(Constraint(w, f.body_ptr()));
                ranges.push_back({offset, offset + f.arity()});
                offset += f.arity();
            }
            for (std::size_t a = 0; a < ranges.size(); ++a)
                for (std::size_t c2 = a + 1; c2 < ranges.size(); ++c2)
                    for (std::size_t u = ranges[a].first; u < ranges[a].second; ++u)
                        for (std::size_t v = ranges[c2].first; v < ranges[c2].second; ++v) {
                            VarList w = {ctx[u], ctx[v]};
                            out.push_back(Constraint::full(w));
                        }
        } else {
            out.push_back(c);  // single whole-context clause
        }
    }
    plan.validate(b, limits);
    return plan;
}

// --- parallel repetition ------------------------------------------------

std::string repeat_variable_name(const std::string& var, int copy) {
    return var + "@" + std::to_string(copy);
}

int repeated_question_index(int m, const std::vector<int>& tuple) {
    int flat = 0;
    for (int i : tuple) {
        if (i < 0 || i >= m) throw DimensionMismatch("question index out of range");
        flat = flat * m + i;
    }
    return flat;
}

std::pair<Bcs, QuestionDistribution> parallel_repeat(const Bcs& b,
                                                     const QuestionDistribution& pi, int n,
                                                     const Limits& limits) {
    if (n < 1) throw DomainMismatch("repetition count must be >= 1");
    b.validate();
    double questions = std::pow(static_cast<double>(b.m()), n);
    if (questions * questions > static_cast<double>(limits.search_bound))
        throw TooLarge("repeated game would have " + std::to_string(questions) + " questions");
    int m = b.m();
    int total = 1;
    for (int k = 0; k < n; ++k) total *= m;

    Bcs out;
    for (int k = 1; k <= n; ++k)
        for (const auto& x : b.variables) out.variables.push_back(repeat_variable_name(x, k));

    std::vector<int> tuple(n, 0);
    for (int flat = 0; flat < total; ++flat) {
        int rest = flat;
        for (int k = n - 1; k >= 0; --k) {
            tuple[k] = rest % m;
            rest /= m;
        }
        VarList ctx;
        std::vector<Constraint> factors;
        std::string label;
        for (int k = 0; k < n; ++k) {
            VarList part;
            for (const auto& x : b.context(tuple[k]))
                part.push_back(repeat_variable_name(x, k + 1));
            ctx.insert(ctx.end(), part.begin(), part.end());
            factors.push_back(Constraint(part, b.constraint(tuple[k]).body_ptr()));
            label += (k ? "," : "") + b.name(tuple[k]);
        }
        out.constraints.push_back(Constraint(ctx, std::make_shared<ProductBody>(factors)));
        out.names.push_back("(" + label + ")");
    }

    std::vector<std::vector<Rat>> weights(total, std::vector<Rat>(total));
    for (int a = 0; a < total; ++a)
        for (int c = 0; c < total; ++c) {
            Rat w = 1;
            for (int k = 0; k < n; ++k) {
                int div = 1;
                for (int t = k + 1; t < n; ++t) div *= m;
                w *= pi.weight((a / div) % m, (c / div) % m);
            }
            weights[a][c] = w;
        }
    return {std::move(out), QuestionDistribution::dense(std::move(weights))};
}

Correlation product_correlation(const Game& base, const Correlation& p, int n,
                                const Limits& limits) {
    int m = base.question_count();
    double questions = std::pow(static_cast<double>(m), n);
    if (questions * questions > static_cast<double>(limits.search_bound))
        throw TooLarge("product correlation too large");
    int total = 1;
    for (int k = 0; k < n; ++k) total *= m;

    Correlation out;
    std::vector<int> ta(n), tb(n);
    for (int a = 0; a < total; ++a) {
        int rest = a;
        for (int k = n - 1; k >= 0; --k) {
            ta[k] = rest % m;
            rest /= m;
        }
        for (int c = 0; c < total; ++c) {
            rest = c;
            for (int k = n - 1; k >= 0; --k) {
                tb[k] = rest % m;
                rest /= m;
            }
            // Multiply out the per-copy tables.
            std::map<std::pair<std::string, std::string>, Rat> table;
            table[{"", ""}] = Rat(1);
            for (int k = 0; k < n; ++k) {
                auto it = p.tables.find({ta[k], tb[k]});
                if (it == p.tables.end())
                    throw MissingTable("pair (" + std::to_string(ta[k] + 1) + "," +
                                       std::to_string(tb[k] + 1) + ")");
                std::map<std::pair<std::string, std::string>, Rat> next;
                for (const auto& [prefix, wp] : table)
                    for (const auto& [answers, wq] : it->second)
                        next[{prefix.first + answers.first, prefix.second + answers.second}] =
                            wp * wq;
                table = std::move(next);
                if (table.size() > limits.search_bound)
                    throw TooLarge("product correlation support too large");
            }
            out.tables[{a, c}] = std::move(table);
        }
    }
    return out;
}

// --- oracularization ------------------------------------------------------

std::pair<Bcs, QuestionDistribution> oracularize(const Game& g, const Limits& limits) {
    if (!is_synchronous_game(g, limits)) throw NotSynchronous("oracularize needs a synchronous game");
    const Bcs& b = g.bcs();
    int m = b.m();

    auto renamed = [&](int i) {
        VarList ctx;
        for (const auto& v : b.context(i)) ctx.push_back("q" + std::to_string(i + 1) + ":" + v);
        return ctx;
    };

    Bcs out;
    for (int i = 0; i < m; ++i) {
        VarList ctx = renamed(i);
        out.variables.insert(out.variables.end(), ctx.begin(), ctx.end());
    }
    // Single questions keep their (renamed) answer sets.
    for (int i = 0; i < m; ++i) {
        out.constraints.push_back(Constraint(renamed(i), b.constraint(i).body_ptr()));
        out.names.push_back(b.name(i));
    }

    // Pair questions for every ordered pair with positive weight.
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (g.pi().weight(i, j) > 0) pairs.push_back({i, j});

    std::unordered_map<long long, int> pair_question;  // (i*m+j) -> question index
    for (const auto& [i, j] : pairs) {
        auto rows_i = g.answers(i).enumerate_satisfying(limits);
        auto rows_j = g.answers(j).enumerate_satisfying(limits);
        VarList ctx;
        std::vector<SignVec> table;
        if (i == j) {
            ctx = renamed(i);
            for (const auto& a : rows_i)
                if (g.win(a, a, i, i)) table.push_back(a.signs_in_order(b.context(i)));
        } else {
            VarList first = renamed(std::min(i, j)), second = renamed(std::max(i, j));
            ctx = first;
            ctx.insert(ctx.end(), second.begin(), second.end());
            for (const auto& a : rows_i)
                for (const auto& c : rows_j) {
                    if (!g.win(a, c, i, j)) continue;
                    SignVec row_first = (i < j ? a : c).signs_in_order(b.context(std::min(i, j)));
                    SignVec row_second = (i < j ? c : a).signs_in_order(b.context(std::max(i, j)));
                    SignVec row = row_first;
                    row.insert(row.end(), row_second.begin(), row_second.end());
                    table.push_back(std::move(row));
                }
        }
        if (table.empty())
            throw EmptyResult("no winning answers for the pair question (" +
                              std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        pair_question[static_cast<long long>(i) * m + j] = out.m();
        out.constraints.push_back(Constraint::table(ctx, std::move(table)));
        out.names.push_back("(" + b.name(i) + "," + b.name(j) + ")");
    }

    int total = out.m();
    std::vector<std::vector<Rat>> weights(total, std::vector<Rat>(total, Rat(0)));
    for (const auto& [i, j] : pairs) {
        Rat w = g.pi().weight(i, j);
        int pq = pair_question[static_cast<long long>(i) * m + j];
        Rat eighth = w / 8;
        weights[pq][i] += eighth;
        weights[pq][j] += eighth;
        weights[i][pq] += eighth;
        weights[j][pq] += eighth;
        weights[pq][pq] += w / 2;
    }
    return {std::move(out), QuestionDistribution::dense(std::move(weights))};
}

Bcs sync_game_to_bcs(const Game& g, const Limits& limits) {
    if (!is_synchronous_game(g, limits))
        throw NotSynchronous("the indicator construction needs a synchronous game");
    const Bcs& b = g.bcs();
    int m = b.m();

    std::vector<std::vector<Assignment>> answers(m);
    std::vector<VarList> vars(m);
    Bcs out;
    for (int i = 0; i < m; ++i) {
        answers[i] = g.answers(i).enumerate_satisfying(limits);
        if (static_cast<int>(answers[i].size()) > limits.enumeration_bound_vars)
            throw TooLarge("answer set of question " + std::to_string(i + 1) +
                           " is too large for indicator variables");
        for (std::size_t a = 0; a < answers[i].size(); ++a)
            vars[i].push_back("q" + std::to_string(i + 1) + ":a" + std::to_string(a));
        out.variables.insert(out.variables.end(), vars[i].begin(), vars[i].end());
    }

    // At least one answer chosen per question.
    for (int i = 0; i < m; ++i) {
        int k = static_cast<int>(vars[i].size());
        std::vector<SignVec> rows;
        for (std::uint64_t o = 0; o < (1ULL << k); ++o) {
            SignVec s = signvec_from_ordinal(o, k);
            if (std::any_of(s.begin(), s.end(), [](Sign v) { return v < 0; }))
                rows.push_back(std::move(s));
        }
        out.constraints.push_back(Constraint::table(vars[i], std::move(rows)));
        out.names.push_back("choose:" + b.name(i));
    }

    // Never both of a losing pair.
    auto not_both = [&]() {
        // rows over two variables excluding (-,-)
        return std::vector<SignVec>{{-1, +1}, {+1, -1}, {+1, +1}};
    };
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j)
            for (std::size_t a = 0; a < answers[i].size(); ++a) {
                std::size_t c0 = (i == j) ? a + 1 : 0;
                for (std::size_t c = c0; c < answers[j].size(); ++c) {
                    if (g.win(answers[i][a], answers[j][c], i, j)) continue;
                    out.constraints.push_back(
                        Constraint::table({vars[i][a], vars[j][c]}, not_both()));
                    out.names.push_back("lose:" + b.name(i) + ":a" + std::to_string(a) + "/" +
                                        b.name(j) + ":a" + std::to_string(c));
                }
            }
    out.validate();
    return out;
}

// --- classical homomorphisms ----------------------------------------------

void validate_classical_hom(const Bcs& source, const Bcs& target, const ClassicalHom& hom,
                            const Limits& limits) {
    if (static_cast<int>(hom.answer_map.size()) != source.m() || source.m() != target.m())
        throw HomInvalid("answer maps must cover every constraint");
    for (int i = 0; i < source.m(); ++i) {
        for (const auto& [from, to] : hom.answer_map[i]) {
            Assignment psi = Assignment::from_sign_string(target.context(i), from);
            Assignment phi = Assignment::from_sign_string(source.context(i), to);
            if (!target.constraint(i).contains(psi))
                throw HomInvalid("map key is not a target answer for constraint " +
                                 std::to_string(i + 1));
            if (!source.constraint(i).contains(phi))
                throw HomInvalid("map image is not a source answer for constraint " +
                                 std::to_string(i + 1));
        }
    }
    (void)limits;
    // Inconsistency preservation: disagreeing images force disagreeing inputs.
    for (int i = 0; i < source.m(); ++i) {
        for (int j = 0; j < source.m(); ++j) {
            VarList shared_target = context_intersection(target.context(i), target.context(j));
            VarList shared_source = context_intersection(source.context(i), source.context(j));
            for (const auto& [from_i, to_i] : hom.answer_map[i])
                for (const auto& [from_j, to_j] : hom.answer_map[j]) {
                    Assignment psi_i = Assignment::from_sign_string(target.context(i), from_i);
                    Assignment psi_j = Assignment::from_sign_string(target.context(j), from_j);
                    Assignment phi_i = Assignment::from_sign_string(source.context(i), to_i);
                    Assignment phi_j = Assignment::from_sign_string(source.context(j), to_j);
                    if (!phi_i.agrees_on(phi_j, shared_source) &&
                        psi_i.agrees_on(psi_j, shared_target))
                        throw HomInvalid("consistent target answers map to inconsistent "
                                         "source answers at pair (" +
                                         std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                         ")");
                }
        }
    }
}

DeterministicStrategy transport_strategy(const Bcs& source, const Bcs& target,
                                         const ClassicalHom& hom,
                                         const DeterministicStrategy& s) {
    if (static_cast<int>(s.answer.size()) != target.m())
        throw DimensionMismatch("strategy does not match the target system");
    if (static_cast<int>(hom.answer_map.size()) != target.m())
        throw HomInvalid("answer maps must cover every constraint");
    DeterministicStrategy out;
    for (int i = 0; i < target.m(); ++i) {
        std::string key = s.answer[i].sign_string(target.context(i));
        auto it = hom.answer_map[i].find(key);
        if (it == hom.answer_map[i].end())
            throw HomInvalid("no image for answer '" + key + "' of constraint " +
                             std::to_string(i + 1));
        out.answer.push_back(Assignment::from_sign_string(source.context(i), it->second));
    }
    return out;
}

ClassicalHom obliviation_hom(const Bcs& b, int degree, const Limits& limits) {
    Bcs obl = obliviate(b, degree);
    ClassicalHom hom;
    hom.answer_map.resize(b.m());
    for (int i = 0; i < b.m(); ++i) {
        const auto& body = static_cast<const ObliviatedBody&>(obl.constraint(i).body());
        for (const auto& row : obl.constraint(i).enumerate_satisfying_signs(limits)) {
            hom.answer_map[i][signs_to_string(row)] = signs_to_string(body.project(row));
        }
    }
    return hom;
}

// --- 3SAT rewriting --------------------------------------------------------

namespace {

struct TseitinResult {
    VarList aux;                      // fresh auxiliary names, creation order
    std::vector<Clause> clauses;      // over context ++ aux positions
    std::vector<SignVec> extensions;  // aux values per satisfying assignment
};

// Biconditional Tseitin clauses over the constraint's indicator circuit.
// Inputs and input negations become literals; every And/Or gate gets one
// auxiliary.
TseitinResult tseitin(const Constraint& c, int constraint_1based, const Limits& limits) {
    TseitinResult out;
    Circuit circuit = circuit_from_constraint(c, limits);
    int ctx_arity = c.arity();

    struct LitRef {
        int position;  // over context ++ aux
        bool positive;
    };
    std::vector<LitRef> gate_literal(circuit.gates().size());

    auto fresh_aux = [&](void) -> int {
        out.aux.push_back("aux:" + std::to_string(constraint_1based) + ":" +
                          std::to_string(out.aux.size()));
        return ctx_arity + static_cast<int>(out.aux.size()) - 1;
    };

    using Op = Circuit::Gate::Op;
    for (std::size_t g = 0; g < circuit.gates().size(); ++g) {
        const auto& gate = circuit.gate(static_cast<int>(g));
        switch (gate.op) {
            case Op::Input: {
                const VarList& ctx = c.context();
                auto it = std::find(ctx.begin(), ctx.end(), gate.var);
                gate_literal[g] = {static_cast<int>(it - ctx.begin()), true};
                break;
            }
            case Op::Const: {
                // Only the all-true constraint compiles to a constant; handled
                // by the caller with an empty clause list.
                gate_literal[g] = {-1, gate.value};
                break;
            }
            case Op::Not: {
                LitRef a = gate_literal[gate.a];
                gate_literal[g] = {a.position, !a.positive};
                break;
            }
            case Op::And:
            case Op::Or: {
                LitRef a = gate_literal[gate.a];
                LitRef b = gate_literal[gate.b];
                int self = fresh_aux();
                if (gate.op == Op::And) {
                    // self <-> a and b
                    out.clauses.push_back({{a.position, !a.positive},
                                           {b.position, !b.positive},
                                           {self, true}});
                    out.clauses.push_back({{a.position, a.positive}, {self, false}});
                    out.clauses.push_back({{b.position, b.positive}, {self, false}});
                } else {
                    // self <-> a or b
                    out.clauses.push_back({{a.position, a.positive},
                                           {b.position, b.positive},
                                           {self, false}});
                    out.clauses.push_back({{a.position, !a.positive}, {self, true}});
                    out.clauses.push_back({{b.position, !b.positive}, {self, true}});
                }
                gate_literal[g] = {self, true};
                break;
            }
        }
    }
    LitRef output = gate_literal[circuit.output()];
    if (output.position < 0) {
        // Constant-true circuit: no clauses, no auxiliaries.
        out.extensions.assign(c.enumerate_satisfying_signs(limits).size(), SignVec{});
        return out;
    }
    out.clauses.push_back({{output.position, output.positive}});

    // Aux values are the gate values; evaluate per satisfying assignment.
    for (const auto& row : c.enumerate_satisfying_signs(limits)) {
        Assignment phi(c.context(), row);
        std::vector<char> value(circuit.gates().size(), 0);
        SignVec aux_signs;
        for (std::size_t g = 0; g < circuit.gates().size(); ++g) {
            const auto& gate = circuit.gate(static_cast<int>(g));
            switch (gate.op) {
                case Op::Input: value[g] = phi.at(gate.var) < 0; break;
                case Op::Const: value[g] = gate.value; break;
                case Op::Not: value[g] = !value[gate.a]; break;
                case Op::And: value[g] = value[gate.a] && value[gate.b]; break;
                case Op::Or: value[g] = value[gate.a] || value[gate.b]; break;
            }
            if (gate.op == Op::And || gate.op == Op::Or)
                aux_signs.push_back(value[g] ? Sign(-1) : Sign(+1));
        }
        out.extensions.push_back(std::move(aux_signs));
    }
    return out;
}

}  // namespace

To3SatResult to_3sat(const Bcs& b, const Limits& limits) {
    b.validate();
    To3SatResult result;
    result.system.variables = b.variables;
    result.projection.answer_map.resize(b.m());
    result.extension.answer_map.resize(b.m());

    std::vector<VarList> aux_blocks(b.m());
    std::vector<Constraint> new_constraints;

    for (int i = 0; i < b.m(); ++i) {
        const Constraint& c = b.constraint(i);
        const VarList& ctx = c.context();

        if (c.body().kind() == "3sat") {
            // Already in clause form; identity maps.
            new_constraints.push_back(c);
            for (const auto& row : c.enumerate_satisfying_signs(limits)) {
                std::string key = signs_to_string(row);
                result.projection.answer_map[i][key] = key;
                result.extension.answer_map[i][key] = key;
            }
            continue;
        }

        TseitinResult ts = tseitin(c, i + 1, limits);
        aux_blocks[i] = ts.aux;
        VarList w = ctx;
        w.insert(w.end(), ts.aux.begin(), ts.aux.end());
        new_constraints.push_back(Constraint(
            w, std::make_shared<ThreeSatBody>(static_cast<int>(w.size()), ts.clauses)));

        auto rows = c.enumerate_satisfying_signs(limits);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            std::string base = signs_to_string(rows[r]);
            std::string extended = base + signs_to_string(ts.extensions[r]);
            result.projection.answer_map[i][extended] = base;
            result.extension.answer_map[i][base] = extended;
        }
    }

    for (int i = 0; i < b.m(); ++i)
        result.system.variables.insert(result.system.variables.end(), aux_blocks[i].begin(),
                                       aux_blocks[i].end());
    result.system.constraints = std::move(new_constraints);
    result.system.names = b.names;
    result.system.validate();
    return result;
}

}  // namespace bcszk
