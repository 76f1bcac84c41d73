#include "bcszk/tableau.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <set>

namespace bcszk {

std::string TabAtom::name(int constraint_1based) const {
    switch (kind) {
        case Kind::Base: return base;
        case Kind::Entry:
            return "T" + std::to_string(constraint_1based) + "(" + std::to_string(p) + "," +
                   std::to_string(q) + ")";
        case Kind::Randomizer:
            return "r" + std::to_string(constraint_1based) + "(" + std::to_string(p) + "," +
                   std::to_string(q) + ")";
    }
    return {};
}

int TabConstraintData::entry_atom(int p, int q) const {
    return base_arity() + (p - 1) * d + (q - 1);
}

int TabConstraintData::randomizer_atom(int p, int k) const {
    return base_arity() + 4 * d + (p - 1) * (d - 1) + (k - 1);
}

ClauseWindow TabConstraintData::window(int j) const {
    if (j < static_cast<int>(typed_windows.size())) return typed_windows[j];
    int t = j - static_cast<int>(typed_windows.size());
    if (t >= static_cast<int>(trivial_pairs.size()))
        throw DimensionMismatch("window index out of range");
    ClauseWindow w;
    w.type = 4;
    w.atom_indices = {trivial_pairs[t].first, trivial_pairs[t].second};
    return w;
}

namespace {

void append_atom_bools(const TabAtom& atom, int constraint_1based, VarList& out) {
    if (atom.kind == TabAtom::Kind::Base) {
        out.push_back(atom.base);
        return;
    }
    std::string stem = atom.name(constraint_1based);
    for (int b = 0; b < kS5CodeBits; ++b) out.push_back(stem + "#" + std::to_string(b));
}

void check_recognizes(const Constraint& base, const Pbp& pbp, int index, const Limits& limits) {
    if (!pbp.sigma.is_five_cycle())
        throw NotRecognizing("program " + std::to_string(index + 1) + ": sigma is not a 5-cycle");
    if (base.arity() <= limits.enumeration_bound_vars) {
        if (!recognizes(pbp, base, limits))
            throw NotRecognizing("program " + std::to_string(index + 1) +
                                 " does not recognize its constraint");
        return;
    }
    // Context too wide for the exhaustive check; deterministic spot check on
    // uniform and satisfying samples.
    Rng rng(0xb4c5u + static_cast<std::uint64_t>(index));
    for (int trial = 0; trial < 256; ++trial) {
        SignVec signs(base.arity());
        if (trial % 2 == 0) {
            for (auto& s : signs) s = rng.coin() ? Sign(-1) : Sign(+1);
        } else {
            signs = base.sample_satisfying_signs(rng, limits);
        }
        Perm5 value = eval_pbp(pbp, base.to_assignment(signs));
        bool member = base.contains_signs(signs);
        if (value != (member ? pbp.sigma : Perm5::identity()))
            throw NotRecognizing("program " + std::to_string(index + 1) +
                                 " fails a sampled recognition check");
    }
}

std::vector<int> fill_rows_impl(const TabConstraintData& tc, const SignVec& base_signs,
                                const std::vector<int>& randomizers) {
    const int d = tc.d;
    auto rand_at = [&](int p, int k) -> int {  // boundary columns are the identity
        if (k == 0 || k == d) return 0;
        return randomizers[(p - 1) * (d - 1) + (k - 1)];
    };
    std::vector<int> rows(4 * d);
    for (int q = 1; q <= d; ++q)
        rows[q - 1] = tc.instr_perm[q - 1][base_signs[tc.instr_var_pos[q - 1]] < 0 ? 1 : 0];
    for (int p = 1; p <= 3; ++p)
        for (int q = 1; q <= d; ++q) {
            int t = rows[(p - 1) * d + (q - 1)];
            rows[p * d + (q - 1)] = s5_mul(s5_mul(s5_inv(rand_at(p, q - 1)), t), rand_at(p, q));
        }
    return rows;
}

bool clauses_hold(const TabConstraintData& tc, const std::vector<int>& values) {
    const int d = tc.d;
    auto entry = [&](int p, int q) { return values[tc.entry_atom(p, q)]; };
    auto rand_at = [&](int p, int k) {
        if (k == 0 || k == d) return 0;
        return values[tc.randomizer_atom(p, k)];
    };
    for (int q = 1; q <= d; ++q) {
        int sign = values[tc.instr_var_pos[q - 1]];
        if (entry(1, q) != tc.instr_perm[q - 1][sign < 0 ? 1 : 0]) return false;
    }
    for (int p = 1; p <= 3; ++p)
        for (int q = 1; q <= d; ++q)
            if (entry(p + 1, q) !=
                s5_mul(s5_mul(s5_inv(rand_at(p, q - 1)), entry(p, q)), rand_at(p, q)))
                return false;
    int product = 0;
    for (int q = 1; q <= d; ++q) product = s5_mul(product, entry(4, q));
    return product == tc.sigma;
}

// Atom values: signs (-1/+1) for base atoms, S5 indices for permutation
// atoms. Extraction returns false on invalid codes or size mismatches.
int window_bit_count(const TabConstraintData& tc, const ClauseWindow& w) {
    int bits = 0;
    for (int a : w.atom_indices) bits += tc.atoms[a].bit_width();
    return bits;
}

bool window_values_from_signs(const TabConstraintData& tc, const ClauseWindow& w,
                              const SignVec& signs, std::vector<int>& values) {
    if (static_cast<int>(signs.size()) != window_bit_count(tc, w)) return false;
    values.clear();
    values.reserve(w.atom_indices.size());
    std::size_t offset = 0;
    for (int a : w.atom_indices) {
        if (tc.atoms[a].kind == TabAtom::Kind::Base) {
            values.push_back(signs[offset]);
            offset += 1;
        } else {
            SignVec bits(signs.begin() + offset, signs.begin() + offset + kS5CodeBits);
            auto index = s5_bits_to_index(bits);
            if (!index) return false;
            values.push_back(*index);
            offset += kS5CodeBits;
        }
    }
    return true;
}

bool window_predicate_impl(const TabConstraintData& tc, const ClauseWindow& w,
                           const std::vector<int>& atom_values) {
    auto value_of = [&](int atom) {
        auto it = std::find(w.atom_indices.begin(), w.atom_indices.end(), atom);
        return atom_values[it - w.atom_indices.begin()];
    };
    switch (w.type) {
        case 1: {
            int sign = value_of(tc.instr_var_pos[w.q - 1]);
            return value_of(tc.entry_atom(1, w.q)) == tc.instr_perm[w.q - 1][sign < 0 ? 1 : 0];
        }
        case 2: {
            int left = w.q >= 2 ? value_of(tc.randomizer_atom(w.p, w.q - 1)) : 0;
            int right = w.q <= tc.d - 1 ? value_of(tc.randomizer_atom(w.p, w.q)) : 0;
            int t = value_of(tc.entry_atom(w.p, w.q));
            return value_of(tc.entry_atom(w.p + 1, w.q)) ==
                   s5_mul(s5_mul(s5_inv(left), t), right);
        }
        case 3: {
            int product = 0;
            for (int q = 1; q <= tc.d; ++q)
                product = s5_mul(product, value_of(tc.entry_atom(4, q)));
            return product == tc.sigma;
        }
        case 4: return true;
    }
    return false;
}

SignVec window_values_to_signs(const TabConstraintData& tc, const ClauseWindow& w,
                               const std::vector<int>& values) {
    SignVec out;
    out.reserve(w.atom_indices.size());
    for (std::size_t k = 0; k < w.atom_indices.size(); ++k) {
        if (tc.atoms[w.atom_indices[k]].kind == TabAtom::Kind::Base) {
            out.push_back(static_cast<Sign>(values[k]));
        } else {
            SignVec bits = s5_index_to_bits(values[k]);
            out.insert(out.end(), bits.begin(), bits.end());
        }
    }
    return out;
}

Int window_count_impl(const TabConstraintData& tc, const ClauseWindow& w) {
    switch (w.type) {
        case 1: return 2;
        case 2: {
            // T(p,q) and the window's randomizers are free; T(p+1,q) follows.
            Int total = kS5Order;
            int rand_atoms = static_cast<int>(w.atom_indices.size()) - 2;
            for (int r = 0; r < rand_atoms; ++r) total *= kS5Order;
            return total;
        }
        case 3: {
            Int total = 1;
            for (int q = 1; q < tc.d; ++q) total *= kS5Order;
            return total;
        }
        case 4: {
            Int total = 1;
            for (int a : w.atom_indices)
                total *= tc.atoms[a].kind == TabAtom::Kind::Base ? 2 : kS5Order;
            return total;
        }
    }
    return 0;
}

std::vector<int> window_sample_impl(const TabConstraintData& tc, const ClauseWindow& w,
                                    Rng& rng) {
    std::vector<int> values(w.atom_indices.size());
    auto slot_of = [&](int atom) {
        auto it = std::find(w.atom_indices.begin(), w.atom_indices.end(), atom);
        return static_cast<int>(it - w.atom_indices.begin());
    };
    switch (w.type) {
        case 1: {
            Sign sign = rng.coin() ? Sign(-1) : Sign(+1);
            values[slot_of(tc.instr_var_pos[w.q - 1])] = sign;
            values[slot_of(tc.entry_atom(1, w.q))] = tc.instr_perm[w.q - 1][sign < 0 ? 1 : 0];
            break;
        }
        case 2: {
            int left = 0, right = 0;
            if (w.q >= 2) {
                left = static_cast<int>(rng.below(kS5Order));
                values[slot_of(tc.randomizer_atom(w.p, w.q - 1))] = left;
            }
            if (w.q <= tc.d - 1) {
                right = static_cast<int>(rng.below(kS5Order));
                values[slot_of(tc.randomizer_atom(w.p, w.q))] = right;
            }
            int t = static_cast<int>(rng.below(kS5Order));
            values[slot_of(tc.entry_atom(w.p, w.q))] = t;
            values[slot_of(tc.entry_atom(w.p + 1, w.q))] =
                s5_mul(s5_mul(s5_inv(left), t), right);
            break;
        }
        case 3: {
            int product = 0;
            for (int q = 1; q < tc.d; ++q) {
                int t = static_cast<int>(rng.below(kS5Order));
                values[slot_of(tc.entry_atom(4, q))] = t;
                product = s5_mul(product, t);
            }
            values[slot_of(tc.entry_atom(4, tc.d))] = s5_mul(s5_inv(product), tc.sigma);
            break;
        }
        case 4: {
            for (std::size_t k = 0; k < w.atom_indices.size(); ++k)
                values[k] = tc.atoms[w.atom_indices[k]].kind == TabAtom::Kind::Base
                                ? (rng.coin() ? -1 : +1)
                                : static_cast<int>(rng.below(kS5Order));
            break;
        }
    }
    return values;
}

TabConstraintData build_constraint_data(const Bcs& base, int i, Pbp pbp, const Limits& limits) {
    TabConstraintData tc;
    tc.base = base.constraint(i);
    check_recognizes(tc.base, pbp, i, limits);
    tc.pbp = std::move(pbp);
    tc.d = tc.pbp.depth();
    if (tc.d < 1) throw NotRecognizing("programs must have at least one instruction");
    tc.sigma = s5_index(tc.pbp.sigma);

    const VarList& ctx = tc.base.context();
    for (const auto& inst : tc.pbp.instructions) {
        auto it = std::find(ctx.begin(), ctx.end(), inst.var);
        if (it == ctx.end()) throw UnboundVariable(inst.var + " not in context");
        tc.instr_var_pos.push_back(static_cast<int>(it - ctx.begin()));
        tc.instr_perm.push_back({s5_index(inst.on_plus), s5_index(inst.on_minus)});
    }

    for (const auto& v : ctx) tc.atoms.push_back({TabAtom::Kind::Base, v, 0, 0});
    for (int p = 1; p <= 4; ++p)
        for (int q = 1; q <= tc.d; ++q) tc.atoms.push_back({TabAtom::Kind::Entry, "", p, q});
    for (int p = 1; p <= 3; ++p)
        for (int k = 1; k <= tc.d - 1; ++k)
            tc.atoms.push_back({TabAtom::Kind::Randomizer, "", p, k});

    tc.atom_bit_offset.reserve(tc.atoms.size());
    for (const auto& atom : tc.atoms) {
        tc.atom_bit_offset.push_back(static_cast<int>(tc.bool_vars.size()));
        append_atom_bools(atom, i + 1, tc.bool_vars);
    }

    // Clause list: row-1 program clauses, conjugation clauses, the row-4
    // product clause, then a trivial clause on every pair of atoms that does
    // not already share a window, so the list is a subdivision of D_i.
    int n_atoms = static_cast<int>(tc.atoms.size());
    std::vector<char> covered(static_cast<std::size_t>(n_atoms) * n_atoms, 0);
    auto push_window = [&](int type, int p, int q, std::vector<int> atom_indices) {
        std::sort(atom_indices.begin(), atom_indices.end());
        for (std::size_t a = 0; a < atom_indices.size(); ++a)
            for (std::size_t b = a + 1; b < atom_indices.size(); ++b)
                covered[static_cast<std::size_t>(atom_indices[a]) * n_atoms +
                        atom_indices[b]] = 1;
        ClauseWindow w;
        w.type = type;
        w.p = p;
        w.q = q;
        w.atom_indices = std::move(atom_indices);
        tc.typed_windows.push_back(std::move(w));
    };

    for (int q = 1; q <= tc.d; ++q)
        push_window(1, 0, q, {tc.instr_var_pos[q - 1], tc.entry_atom(1, q)});
    for (int p = 1; p <= 3; ++p)
        for (int q = 1; q <= tc.d; ++q) {
            std::vector<int> atoms = {tc.entry_atom(p, q), tc.entry_atom(p + 1, q)};
            if (q >= 2) atoms.push_back(tc.randomizer_atom(p, q - 1));
            if (q <= tc.d - 1) atoms.push_back(tc.randomizer_atom(p, q));
            push_window(2, p, q, std::move(atoms));
        }
    {
        std::vector<int> atoms;
        for (int q = 1; q <= tc.d; ++q) atoms.push_back(tc.entry_atom(4, q));
        push_window(3, 0, 0, std::move(atoms));
    }
    for (int u = 0; u < n_atoms; ++u)
        for (int v = u + 1; v < n_atoms; ++v)
            if (!covered[static_cast<std::size_t>(u) * n_atoms + v])
                tc.trivial_pairs.push_back({u, v});

    return tc;
}

}  // namespace

TableauSystem::TableauSystem(Bcs base, std::vector<Pbp> pbps, const Limits& limits) {
    base.validate();
    if (static_cast<int>(pbps.size()) != base.m())
        throw DimensionMismatch("need one program per constraint");
    auto data = std::make_shared<TabData>();
    for (int i = 0; i < base.m(); ++i)
        data->cons.push_back(build_constraint_data(base, i, std::move(pbps[i]), limits));
    data->all_vars = base.variables;
    for (int i = 0; i < base.m(); ++i) {
        const auto& tc = data->cons[i];
        for (std::size_t a = tc.base.context().size(); a < tc.atoms.size(); ++a)
            append_atom_bools(tc.atoms[a], i + 1, data->all_vars);
    }
    data->base = std::move(base);
    data_ = std::move(data);
}

Bcs TableauSystem::tab_bcs() const {
    Bcs out;
    out.variables = data_->all_vars;
    for (int i = 0; i < m(); ++i) {
        const auto& tc = data_->cons[i];
        out.constraints.push_back(
            Constraint(tc.bool_vars, std::make_shared<TabContextBody>(data_, i)));
        out.names.push_back("W" + std::to_string(i + 1));
    }
    return out;
}

VarList TableauSystem::window_bool_vars(int i, const ClauseWindow& w) const {
    const auto& tc = data_->cons.at(i);
    VarList out;
    for (int a : w.atom_indices) {
        int offset = tc.atom_bit_offset[a];
        for (int b = 0; b < tc.atoms[a].bit_width(); ++b)
            out.push_back(tc.bool_vars[offset + b]);
    }
    return out;
}

Constraint TableauSystem::window_constraint(int i, int j) const {
    ClauseWindow w = window(i, j);
    VarList vars = window_bool_vars(i, w);
    return Constraint(std::move(vars), std::make_shared<TabClauseBody>(data_, i, j));
}

Bcs TableauSystem::tab_sub_bcs() const {
    Bcs out;
    out.variables = data_->all_vars;
    for (int i = 0; i < m(); ++i) {
        for (int j = 0; j < window_count(i); ++j) {
            out.constraints.push_back(window_constraint(i, j));
            out.names.push_back("c" + std::to_string(i + 1) + "." + std::to_string(j + 1) +
                                ":t" + std::to_string(window(i, j).type));
        }
    }
    return out;
}

std::vector<int> TableauSystem::fill_rows(int i, const SignVec& base_signs,
                                          const std::vector<int>& randomizers) const {
    const auto& tc = data_->cons.at(i);
    if (static_cast<int>(base_signs.size()) != tc.base_arity())
        throw DomainMismatch("base sign arity mismatch");
    if (static_cast<int>(randomizers.size()) != tc.randomizer_count())
        throw DomainMismatch("randomizer count mismatch");
    return fill_rows_impl(tc, base_signs, randomizers);
}

Assignment TableauSystem::tableau_complete(int i, const Assignment& phi,
                                           const std::vector<Perm5>& randomizers) const {
    const auto& tc = data_->cons.at(i);
    if (!tc.base.accepts(phi))
        throw NotSatisfying("assignment does not satisfy the base constraint");
    if (static_cast<int>(randomizers.size()) != tc.randomizer_count())
        throw DomainMismatch("expected " + std::to_string(tc.randomizer_count()) +
                             " randomizers");
    std::vector<int> rand_idx;
    rand_idx.reserve(randomizers.size());
    for (const auto& r : randomizers) rand_idx.push_back(s5_index(r));
    SignVec base_signs = phi.signs_in_order(tc.base.context());
    std::vector<int> rows = fill_rows_impl(tc, base_signs, rand_idx);

    Assignment out;
    for (std::size_t a = 0; a < tc.atoms.size(); ++a) {
        const TabAtom& atom = tc.atoms[a];
        int offset = tc.atom_bit_offset[a];
        if (atom.kind == TabAtom::Kind::Base) {
            out.bind(tc.bool_vars[offset], base_signs[a]);
        } else {
            int value = atom.kind == TabAtom::Kind::Entry
                            ? rows[(atom.p - 1) * tc.d + (atom.q - 1)]
                            : rand_idx[(atom.p - 1) * (tc.d - 1) + (atom.q - 1)];
            SignVec bits = s5_index_to_bits(value);
            for (int b = 0; b < kS5CodeBits; ++b) out.bind(tc.bool_vars[offset + b], bits[b]);
        }
    }
    return out;
}

bool TableauSystem::check_tableau_membership(int i, const Assignment& psi) const {
    const auto& tc = data_->cons.at(i);
    std::vector<int> values(tc.atoms.size());
    for (std::size_t a = 0; a < tc.atoms.size(); ++a) {
        int offset = tc.atom_bit_offset[a];
        if (tc.atoms[a].kind == TabAtom::Kind::Base) {
            auto s = psi.get(tc.bool_vars[offset]);
            if (!s) return false;
            values[a] = *s;
        } else {
            SignVec bits(kS5CodeBits);
            for (int b = 0; b < kS5CodeBits; ++b) {
                auto s = psi.get(tc.bool_vars[offset + b]);
                if (!s) return false;
                bits[b] = *s;
            }
            auto index = s5_bits_to_index(bits);
            if (!index) return false;
            values[a] = *index;
        }
    }
    return clauses_hold(tc, values);
}

bool TableauSystem::window_predicate(int i, const ClauseWindow& w,
                                     const std::vector<int>& atom_values) const {
    return window_predicate_impl(data_->cons.at(i), w, atom_values);
}

std::string TableauSystem::window_answer_string(int i, const ClauseWindow& w,
                                                const SignVec& base_signs,
                                                const std::vector<int>& rows,
                                                const std::vector<int>& randomizers) const {
    const auto& tc = data_->cons.at(i);
    std::string out;
    for (int a : w.atom_indices) {
        const TabAtom& atom = tc.atoms[a];
        if (atom.kind == TabAtom::Kind::Base) {
            out.push_back(sign_to_char(base_signs[a]));
        } else {
            int value = atom.kind == TabAtom::Kind::Entry
                            ? rows[(atom.p - 1) * tc.d + (atom.q - 1)]
                            : randomizers[(atom.p - 1) * (tc.d - 1) + (atom.q - 1)];
            out += signs_to_string(s5_index_to_bits(value));
        }
    }
    return out;
}

std::string TableauSystem::window_string(int i, const ClauseWindow& w,
                                         const std::vector<int>& values) const {
    return signs_to_string(window_values_to_signs(data_->cons.at(i), w, values));
}

std::optional<std::vector<int>> TableauSystem::window_values(int i, const ClauseWindow& w,
                                                             const SignVec& signs) const {
    std::vector<int> values;
    if (!window_values_from_signs(data_->cons.at(i), w, signs, values)) return std::nullopt;
    return values;
}

CompletionSweep completion_sweep(const TableauSystem& sys, int i, bool parallel,
                                 std::uint64_t perturb_stride, const Limits& limits) {
    const auto& tc = sys.data().cons.at(i);
    const int d = tc.d;
    const int n_rand = tc.randomizer_count();
    auto bases = tc.base.enumerate_satisfying_signs(limits);

    double r_space = std::pow(120.0, n_rand);
    if (r_space * static_cast<double>(bases.size()) > static_cast<double>(limits.search_bound))
        throw TooLarge("completion sweep over " + std::to_string(r_space) + " tuples");
    std::uint64_t tuples = static_cast<std::uint64_t>(r_space);

    std::uint64_t checker_failures = 0, restriction_failures = 0;
    std::uint64_t perturbation_escapes = 0, perturbations = 0;

    // One chunk per leading randomizer value keeps the parallel split
    // deterministic; the counters are exact sums either way.
    const long long chunks = n_rand > 0 ? kS5Order : 1;
    const std::uint64_t chunk = n_rand > 0 ? tuples / kS5Order : 1;

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel) \
    reduction(+ : checker_failures, restriction_failures, perturbation_escapes, perturbations)
#endif
    for (long long c = 0; c < chunks; ++c) {
        std::vector<int> rand(n_rand, 0);
        std::vector<int> values(tc.atoms.size(), 0);
        for (std::uint64_t t = 0; t < chunk; ++t) {
            std::uint64_t flat = static_cast<std::uint64_t>(c) * chunk + t;
            std::uint64_t rest = flat;
            for (int r = n_rand - 1; r >= 0; --r) {
                rand[r] = static_cast<int>(rest % kS5Order);
                rest /= kS5Order;
            }
            for (const auto& base : bases) {
                std::vector<int> rows = fill_rows_impl(tc, base, rand);
                for (int v = 0; v < tc.base_arity(); ++v) values[v] = base[v];
                for (int p = 1; p <= 4; ++p)
                    for (int q = 1; q <= d; ++q)
                        values[tc.entry_atom(p, q)] = rows[(p - 1) * d + (q - 1)];
                for (int r = 0; r < n_rand; ++r)
                    values[tc.base_arity() + 4 * d + r] = rand[r];

                if (!clauses_hold(tc, values)) {
                    ++checker_failures;
                    continue;
                }
                // The completion restricts to its inputs by construction;
                // verify the base and randomizer slots anyway.
                bool restricts = true;
                for (int v = 0; v < tc.base_arity(); ++v)
                    if (values[v] != base[v]) restricts = false;
                for (int r = 0; r < n_rand; ++r)
                    if (values[tc.base_arity() + 4 * d + r] != rand[r]) restricts = false;
                if (!restricts) ++restriction_failures;

                if (perturb_stride && flat % perturb_stride == 0) {
                    // Any single-entry change must be rejected: the clauses
                    // pin every entry given the base and the randomizers.
                    for (int p = 1; p <= 4; ++p)
                        for (int q = 1; q <= d; ++q) {
                            int atom = tc.entry_atom(p, q);
                            int saved = values[atom];
                            values[atom] = (saved + 1) % kS5Order;
                            ++perturbations;
                            if (clauses_hold(tc, values)) ++perturbation_escapes;
                            values[atom] = saved;
                        }
                }
            }
        }
    }

    CompletionSweep total;
    total.cases = tuples * bases.size();
    total.checker_failures = checker_failures;
    total.restriction_failures = restriction_failures;
    total.perturbation_escapes = perturbation_escapes;
    total.perturbations = perturbations;
    return total;
}

TabContextBody::TabContextBody(std::shared_ptr<const TabData> data, int i)
    : data_(std::move(data)), i_(i) {}

bool TabContextBody::contains(const SignVec& signs) const {
    const auto& tc = data_->cons[i_];
    if (signs.size() != tc.bool_vars.size()) return false;
    std::vector<int> values(tc.atoms.size());
    for (std::size_t a = 0; a < tc.atoms.size(); ++a) {
        int offset = tc.atom_bit_offset[a];
        if (tc.atoms[a].kind == TabAtom::Kind::Base) {
            values[a] = signs[offset];
        } else {
            SignVec bits(signs.begin() + offset, signs.begin() + offset + kS5CodeBits);
            auto index = s5_bits_to_index(bits);
            if (!index) return false;
            values[a] = *index;
        }
    }
    return clauses_hold(tc, values);
}

std::optional<Int> TabContextBody::count() const {
    const auto& tc = data_->cons[i_];
    auto base_count = tc.base.body().count();
    if (!base_count) {
        try {
            base_count = tc.base.count_satisfying();
        } catch (const TooLarge&) {
            return std::nullopt;
        }
    }
    Int total = *base_count;
    for (int r = 0; r < tc.randomizer_count(); ++r) total *= kS5Order;
    return total;
}

std::optional<SignVec> TabContextBody::sample(Rng& rng) const {
    const auto& tc = data_->cons[i_];
    SignVec base_signs = tc.base.sample_satisfying_signs(rng);
    std::vector<int> rand_idx(tc.randomizer_count());
    for (auto& r : rand_idx) r = static_cast<int>(rng.below(kS5Order));
    std::vector<int> rows = fill_rows_impl(tc, base_signs, rand_idx);

    SignVec out;
    out.reserve(tc.bool_vars.size());
    for (std::size_t a = 0; a < tc.atoms.size(); ++a) {
        const TabAtom& atom = tc.atoms[a];
        if (atom.kind == TabAtom::Kind::Base) {
            out.push_back(base_signs[a]);
        } else {
            int value = atom.kind == TabAtom::Kind::Entry
                            ? rows[(atom.p - 1) * tc.d + (atom.q - 1)]
                            : rand_idx[(atom.p - 1) * (tc.d - 1) + (atom.q - 1)];
            SignVec bits = s5_index_to_bits(value);
            out.insert(out.end(), bits.begin(), bits.end());
        }
    }
    return out;
}

TabClauseBody::TabClauseBody(std::shared_ptr<const TabData> data, int i, int j)
    : data_(std::move(data)), i_(i), j_(j), window_(data_->cons.at(i).window(j)) {}

bool TabClauseBody::contains(const SignVec& signs) const {
    const auto& tc = data_->cons[i_];
    std::vector<int> values;
    if (!window_values_from_signs(tc, window_, signs, values)) return false;
    return window_predicate_impl(tc, window_, values);
}

std::optional<Int> TabClauseBody::count() const {
    return window_count_impl(data_->cons[i_], window_);
}

std::optional<SignVec> TabClauseBody::sample(Rng& rng) const {
    const auto& tc = data_->cons[i_];
    return window_values_to_signs(tc, window_, window_sample_impl(tc, window_, rng));
}

}  // namespace bcszk
