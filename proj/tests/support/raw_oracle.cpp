#include "raw_oracle.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace bcszk::testsupport {

namespace {

struct Cone {
    std::set<int> base_positions;
    std::set<int> randomizers;  // flat (p-1)*(d-1)+(k-1)
};

Cone window_cone(const TabConstraintData& tc, const ClauseWindow& w) {
    Cone cone;
    auto add_rand = [&](int p, int k) {
        if (k >= 1 && k <= tc.d - 1) cone.randomizers.insert((p - 1) * (tc.d - 1) + (k - 1));
    };
    for (int a : w.atom_indices) {
        const TabAtom& atom = tc.atoms[a];
        switch (atom.kind) {
            case TabAtom::Kind::Base: cone.base_positions.insert(a); break;
            case TabAtom::Kind::Entry:
                cone.base_positions.insert(tc.instr_var_pos[atom.q - 1]);
                for (int j = 1; j < atom.p; ++j) {
                    add_rand(j, atom.q - 1);
                    add_rand(j, atom.q);
                }
                break;
            case TabAtom::Kind::Randomizer: add_rand(atom.p, atom.q); break;
        }
    }
    return cone;
}

int atom_value(const TabConstraintData& tc, const TabAtom& atom, const SignVec& base,
               const std::vector<int>& rand) {
    switch (atom.kind) {
        case TabAtom::Kind::Base: return base[&atom - tc.atoms.data()];
        case TabAtom::Kind::Entry: {
            int t = tc.instr_perm[atom.q - 1][base[tc.instr_var_pos[atom.q - 1]] < 0 ? 1 : 0];
            for (int j = 1; j < atom.p; ++j) {
                int left = atom.q - 1 >= 1 ? rand[(j - 1) * (tc.d - 1) + (atom.q - 2)] : 0;
                int right = atom.q <= tc.d - 1 ? rand[(j - 1) * (tc.d - 1) + (atom.q - 1)] : 0;
                t = s5_mul(s5_mul(s5_inv(left), t), right);
            }
            return t;
        }
        case TabAtom::Kind::Randomizer:
            return rand[(atom.p - 1) * (tc.d - 1) + (atom.q - 1)];
    }
    return 0;
}

std::uint64_t pack_window(const TabConstraintData& tc, const ClauseWindow& w,
                          const SignVec& base, const std::vector<int>& rand) {
    std::uint64_t code = 0;
    for (int a : w.atom_indices) {
        const TabAtom& atom = tc.atoms[a];
        int value = atom_value(tc, atom, base, rand);
        if (atom.kind == TabAtom::Kind::Base)
            code = code * 2 + (value < 0 ? 0 : 1);
        else
            code = code * kS5Order + static_cast<std::uint64_t>(value);
    }
    return code;
}

std::vector<int> unpack_window(const TabConstraintData& tc, const ClauseWindow& w,
                               std::uint64_t code) {
    std::vector<int> values(w.atom_indices.size());
    for (std::size_t k = w.atom_indices.size(); k-- > 0;) {
        const TabAtom& atom = tc.atoms[w.atom_indices[k]];
        int radix = atom.kind == TabAtom::Kind::Base ? 2 : kS5Order;
        int v = static_cast<int>(code % radix);
        code /= radix;
        values[k] = atom.kind == TabAtom::Kind::Base ? (v == 0 ? -1 : +1) : v;
    }
    return values;
}

// Enumerates one constraint side: all (satisfying or free) base assignments
// against the cone randomizers, invoking the sink with the packed window
// code and the tuple multiplicity weight 1.
template <typename Sink>
Int enumerate_side(const CompiledGame& g, int constraint, const ClauseWindow& w,
                   bool satisfying_base, const Limits& limits, Sink&& sink) {
    const auto& tc = g.tableau().data().cons[constraint];
    Cone cone = window_cone(tc, w);
    std::vector<int> rand_list(cone.randomizers.begin(), cone.randomizers.end());

    std::vector<SignVec> bases;
    if (satisfying_base) {
        bases = tc.base.enumerate_satisfying_signs(limits);
    } else {
        // Free assignments over the cone's base positions only.
        std::vector<int> positions(cone.base_positions.begin(), cone.base_positions.end());
        int k = static_cast<int>(positions.size());
        for (std::uint64_t o = 0; o < (1ULL << k); ++o) {
            SignVec base(tc.base_arity(), +1);
            for (int b = 0; b < k; ++b)
                base[positions[b]] = ((o >> (k - 1 - b)) & 1ULL) ? Sign(+1) : Sign(-1);
            bases.push_back(std::move(base));
        }
    }

    double cone_size = static_cast<double>(bases.size()) *
                       std::pow(120.0, static_cast<double>(rand_list.size()));
    if (cone_size > static_cast<double>(limits.oracle_budget))
        throw BudgetExceeded("raw cone too large");

    std::vector<int> rand(tc.randomizer_count(), 0);
    for (const auto& base : bases) {
        std::vector<int> odo(rand_list.size(), 0);
        for (;;) {
            for (std::size_t r = 0; r < rand_list.size(); ++r) rand[rand_list[r]] = odo[r];
            sink(pack_window(tc, w, base, rand));
            std::size_t level = odo.size();
            while (level > 0) {
                if (++odo[level - 1] < kS5Order) break;
                odo[level - 1] = 0;
                --level;
            }
            if (level == 0) break;
        }
    }
    Int total = Int(bases.size());
    for (std::size_t r = 0; r < rand_list.size(); ++r) total *= kS5Order;
    return total;
}

std::map<std::string, Rat> side_marginal(const CompiledGame& g, int constraint,
                                         const ClauseWindow& w, bool satisfying_base,
                                         const Limits& limits) {
    std::unordered_map<std::uint64_t, std::uint64_t> counts;
    Int total = enumerate_side(g, constraint, w, satisfying_base, limits,
                               [&](std::uint64_t code) { ++counts[code]; });
    const auto& tc = g.tableau().data().cons[constraint];
    std::map<std::string, Rat> out;
    for (const auto& [code, count] : counts) {
        Rat p(Int(count), total);
        p.canonicalize();
        out[g.tableau().window_string(constraint, w, unpack_window(tc, w, code))] += p;
    }
    return out;
}

}  // namespace

AnswerPairDistribution raw_exact_distribution(const CompiledGame& g, int question_a,
                                              int question_b, const Limits& limits) {
    auto [ci, wa_index] = g.question_to_window(question_a);
    auto [ck, wb_index] = g.question_to_window(question_b);
    const TableauSystem& tab = g.tableau();
    ClauseWindow wa = tab.window(ci, wa_index);
    ClauseWindow wb = tab.window(ck, wb_index);
    bool case_b = wa.type == 3 || wb.type == 3;

    if (case_b && ci != ck) {
        AnswerPairDistribution out;
        out.factored = true;
        out.left = side_marginal(g, ci, wa, true, limits);
        out.right = side_marginal(g, ck, wb, true, limits);
        return out;
    }

    const auto& tci = tab.data().cons[ci];
    const auto& tck = tab.data().cons[ck];
    Cone cone_a = window_cone(tci, wa);
    Cone cone_b = window_cone(tck, wb);

    AnswerPairDistribution out;
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> counts;
    Int total = 0;

    if (ci == ck) {
        // One draw for both windows: free base for Case A, satisfying base
        // for Case B, cone randomizers of either window.
        std::set<int> rand_union = cone_a.randomizers;
        rand_union.insert(cone_b.randomizers.begin(), cone_b.randomizers.end());
        std::vector<int> rand_list(rand_union.begin(), rand_union.end());

        std::vector<SignVec> bases;
        if (case_b) {
            bases = tci.base.enumerate_satisfying_signs(limits);
        } else {
            std::set<int> base_union = cone_a.base_positions;
            base_union.insert(cone_b.base_positions.begin(), cone_b.base_positions.end());
            std::vector<int> positions(base_union.begin(), base_union.end());
            int k = static_cast<int>(positions.size());
            for (std::uint64_t o = 0; o < (1ULL << k); ++o) {
                SignVec base(tci.base_arity(), +1);
                for (int b = 0; b < k; ++b)
                    base[positions[b]] = ((o >> (k - 1 - b)) & 1ULL) ? Sign(+1) : Sign(-1);
                bases.push_back(std::move(base));
            }
        }
        double cone_size = static_cast<double>(bases.size()) *
                           std::pow(120.0, static_cast<double>(rand_list.size()));
        if (cone_size > static_cast<double>(limits.oracle_budget))
            throw BudgetExceeded("raw cone too large");

        std::vector<int> rand(tci.randomizer_count(), 0);
        for (const auto& base : bases) {
            std::vector<int> odo(rand_list.size(), 0);
            for (;;) {
                for (std::size_t r = 0; r < rand_list.size(); ++r) rand[rand_list[r]] = odo[r];
                ++counts[{pack_window(tci, wa, base, rand), pack_window(tci, wb, base, rand)}];
                std::size_t level = odo.size();
                while (level > 0) {
                    if (++odo[level - 1] < kS5Order) break;
                    odo[level - 1] = 0;
                    --level;
                }
                if (level == 0) break;
            }
        }
        total = Int(bases.size());
        for (std::size_t r = 0; r < rand_list.size(); ++r) total *= kS5Order;
    } else {
        // Case A across constraints: one global draw shares the base
        // variables by name; randomizer tapes are per-constraint.
        const VarList& ctx_a = tci.base.context();
        const VarList& ctx_b = tck.base.context();
        VarList shared_names;
        std::vector<std::pair<int, int>> shared_positions;  // (pos in a, pos in b)
        for (int pa : cone_a.base_positions)
            for (int pb : cone_b.base_positions)
                if (ctx_a[pa] == ctx_b[pb]) shared_positions.push_back({pa, pb});

        // Enumerate side A's cone fully; for every tuple of side B's cone the
        // shared positions must be forced to side A's values. Simplest exact
        // scheme: enumerate the union as (a-base, a-rand, b-only-base,
        // b-rand).
        std::vector<int> a_base(cone_a.base_positions.begin(), cone_a.base_positions.end());
        std::vector<int> b_base;
        for (int pb : cone_b.base_positions) {
            bool shared = false;
            for (const auto& [pa, pb2] : shared_positions)
                if (pb2 == pb) shared = true;
            if (!shared) b_base.push_back(pb);
        }
        std::vector<int> a_rand(cone_a.randomizers.begin(), cone_a.randomizers.end());
        std::vector<int> b_rand(cone_b.randomizers.begin(), cone_b.randomizers.end());

        int bits = static_cast<int>(a_base.size() + b_base.size());
        double cone_size = std::pow(2.0, bits) *
                           std::pow(120.0, static_cast<double>(a_rand.size() + b_rand.size()));
        if (cone_size > static_cast<double>(limits.oracle_budget))
            throw BudgetExceeded("raw cone too large");

        std::vector<int> ra(tci.randomizer_count(), 0), rb(tck.randomizer_count(), 0);
        for (std::uint64_t o = 0; o < (1ULL << bits); ++o) {
            SignVec base_a(tci.base_arity(), +1), base_b(tck.base_arity(), +1);
            int bit = bits - 1;
            for (int pa : a_base) {
                base_a[pa] = ((o >> bit) & 1ULL) ? Sign(+1) : Sign(-1);
                --bit;
            }
            for (int pb : b_base) {
                base_b[pb] = ((o >> bit) & 1ULL) ? Sign(+1) : Sign(-1);
                --bit;
            }
            for (const auto& [pa, pb] : shared_positions) base_b[pb] = base_a[pa];

            std::vector<int> odo(a_rand.size() + b_rand.size(), 0);
            for (;;) {
                for (std::size_t r = 0; r < a_rand.size(); ++r) ra[a_rand[r]] = odo[r];
                for (std::size_t r = 0; r < b_rand.size(); ++r)
                    rb[b_rand[r]] = odo[a_rand.size() + r];
                ++counts[{pack_window(tci, wa, base_a, ra), pack_window(tck, wb, base_b, rb)}];
                std::size_t level = odo.size();
                while (level > 0) {
                    if (++odo[level - 1] < kS5Order) break;
                    odo[level - 1] = 0;
                    --level;
                }
                if (level == 0) break;
            }
        }
        total = Int(1) << bits;
        for (std::size_t r = 0; r < a_rand.size() + b_rand.size(); ++r) total *= kS5Order;
    }

    for (const auto& [codes, count] : counts) {
        Rat p(Int(count), total);
        p.canonicalize();
        std::string key_a =
            g.tableau().window_string(ci, wa, unpack_window(tci, wa, codes.first));
        std::string key_b =
            g.tableau().window_string(ck, wb, unpack_window(tck, wb, codes.second));
        out.joint[{key_a, key_b}] += p;
    }
    return out;
}

}  // namespace bcszk::testsupport
