#include "bcszk/simulator.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <unordered_map>

namespace bcszk {

PairSampler::PairSampler(const CompiledGame& g, int question_a, int question_b) : g_(&g) {
    std::tie(i_, wa_) = g.question_to_window(question_a);
    std::tie(k_, wb_) = g.question_to_window(question_b);
    const TableauSystem& tab = g.tableau();
    left_window_ = tab.window(i_, wa_);
    right_window_ = tab.window(k_, wb_);
    const ClauseWindow& left = left_window_;
    const ClauseWindow& right = right_window_;
    case_b_ = left.type == 3 || right.type == 3;

    const auto& tci = tab.data().cons[i_];
    const auto& tck = tab.data().cons[k_];

    // Union of the two base contexts for the Case A global draw.
    union_base_ = tci.base.context();
    for (const auto& v : tck.base.context())
        if (std::find(union_base_.begin(), union_base_.end(), v) == union_base_.end())
            union_base_.push_back(v);
    for (const auto& v : tci.base.context())
        base_map_left_.push_back(static_cast<int>(
            std::find(union_base_.begin(), union_base_.end(), v) - union_base_.begin()));
    for (const auto& v : tck.base.context())
        base_map_right_.push_back(static_cast<int>(
            std::find(union_base_.begin(), union_base_.end(), v) - union_base_.begin()));

    // Shared atoms between the two windows, as positions in the two value
    // vectors. Within one constraint, atoms are shared by index; across
    // constraints only base variables can coincide.
    for (std::size_t a = 0; a < left.atom_indices.size(); ++a) {
        for (std::size_t b = 0; b < right.atom_indices.size(); ++b) {
            if (i_ == k_) {
                if (left.atom_indices[a] == right.atom_indices[b])
                    shared_values_.push_back({static_cast<int>(a), static_cast<int>(b)});
            } else {
                const TabAtom& atom_a = tci.atoms[left.atom_indices[a]];
                const TabAtom& atom_b = tck.atoms[right.atom_indices[b]];
                if (atom_a.kind == TabAtom::Kind::Base && atom_b.kind == TabAtom::Kind::Base &&
                    atom_a.base == atom_b.base)
                    shared_values_.push_back({static_cast<int>(a), static_cast<int>(b)});
            }
        }
    }
}

const ClauseWindow& PairSampler::left_window() const { return left_window_; }
const ClauseWindow& PairSampler::right_window() const { return right_window_; }

std::vector<int> PairSampler::extract(int constraint, const ClauseWindow& w,
                                      const SignVec& base, const std::vector<int>& rows,
                                      const std::vector<int>& randomizers) const {
    const auto& tc = g_->tableau().data().cons[constraint];
    std::vector<int> values;
    values.reserve(w.atom_indices.size());
    for (int a : w.atom_indices) {
        const TabAtom& atom = tc.atoms[a];
        switch (atom.kind) {
            case TabAtom::Kind::Base: values.push_back(base[a]); break;
            case TabAtom::Kind::Entry:
                values.push_back(rows[(atom.p - 1) * tc.d + (atom.q - 1)]);
                break;
            case TabAtom::Kind::Randomizer:
                values.push_back(randomizers[(atom.p - 1) * (tc.d - 1) + (atom.q - 1)]);
                break;
        }
    }
    return values;
}

PairSampler::Draw PairSampler::sample(Rng& rng) const {
    Draw d;
    sample_into(rng, d);
    return d;
}

void PairSampler::sample_into(Rng& rng, Draw& d) const {
    const TableauSystem& tab = g_->tableau();
    const auto& tci = tab.data().cons[i_];
    const auto& tck = tab.data().cons[k_];
    const ClauseWindow& left = left_window_;
    const ClauseWindow& right = right_window_;

    struct Scratch {
        SignVec unioned, base_left, base_right;
        std::vector<int> rand_left, rand_right;
    };
    thread_local Scratch s;

    auto draw_randomizers = [&](const TabConstraintData& tc, std::vector<int>& r) {
        r.resize(tc.randomizer_count());
        for (auto& value : r) value = static_cast<int>(rng.below(kS5Order));
    };
    auto extract_into = [&](int constraint, const ClauseWindow& w, const SignVec& base,
                            const std::vector<int>& rows, const std::vector<int>& randomizers,
                            std::vector<int>& out) {
        out = extract(constraint, w, base, rows, randomizers);
    };

    if (!case_b_) {
        // One global assignment to shares and randomizers; rows follow the
        // recurrence whether or not the base satisfies anything.
        s.unioned.resize(union_base_.size());
        for (auto& v : s.unioned) v = rng.coin() ? Sign(-1) : Sign(+1);
        s.base_left.resize(base_map_left_.size());
        for (std::size_t p = 0; p < base_map_left_.size(); ++p)
            s.base_left[p] = s.unioned[base_map_left_[p]];
        draw_randomizers(tci, s.rand_left);
        std::vector<int> rows_left = tab.fill_rows(i_, s.base_left, s.rand_left);
        extract_into(i_, left, s.base_left, rows_left, s.rand_left, d.left);

        if (i_ == k_) {
            extract_into(k_, right, s.base_left, rows_left, s.rand_left, d.right);
        } else {
            s.base_right.resize(base_map_right_.size());
            for (std::size_t p = 0; p < base_map_right_.size(); ++p)
                s.base_right[p] = s.unioned[base_map_right_[p]];
            draw_randomizers(tck, s.rand_right);
            std::vector<int> rows_right = tab.fill_rows(k_, s.base_right, s.rand_right);
            extract_into(k_, right, s.base_right, rows_right, s.rand_right, d.right);
        }
        return;
    }

    // Case B: uniform satisfying assignments, independently per constraint.
    s.base_left = tci.base.sample_satisfying_signs(rng);
    draw_randomizers(tci, s.rand_left);
    std::vector<int> rows_left = tab.fill_rows(i_, s.base_left, s.rand_left);
    extract_into(i_, left, s.base_left, rows_left, s.rand_left, d.left);
    if (i_ == k_) {
        extract_into(k_, right, s.base_left, rows_left, s.rand_left, d.right);
    } else {
        s.base_right = tck.base.sample_satisfying_signs(rng);
        draw_randomizers(tck, s.rand_right);
        std::vector<int> rows_right = tab.fill_rows(k_, s.base_right, s.rand_right);
        extract_into(k_, right, s.base_right, rows_right, s.rand_right, d.right);
    }
}

bool PairSampler::wins(const Draw& d) const {
    const TableauSystem& tab = g_->tableau();
    if (!tab.window_predicate(i_, left_window(), d.left)) return false;
    if (!tab.window_predicate(k_, right_window(), d.right)) return false;
    for (const auto& [a, b] : shared_values_)
        if (d.left[a] != d.right[b]) return false;
    return true;
}

std::string PairSampler::left_string(const Draw& d) const {
    return g_->tableau().window_string(i_, left_window(), d.left);
}

std::string PairSampler::right_string(const Draw& d) const {
    return g_->tableau().window_string(k_, right_window(), d.right);
}

std::pair<std::string, std::string> simulate_answers(const CompiledGame& g, int question_a,
                                                     int question_b, Rng& rng) {
    PairSampler sampler(g, question_a, question_b);
    auto draw = sampler.sample(rng);
    return {sampler.left_string(draw), sampler.right_string(draw)};
}

namespace {

constexpr std::uint64_t kSampleBlock = 4096;

// Mixed-radix packing of a window's atom values; fails (returns false) when
// the code space exceeds 63 bits.
bool window_radix(const TabConstraintData& tc, const ClauseWindow& w, double* space) {
    double size = 1;
    for (int a : w.atom_indices)
        size *= tc.atoms[a].kind == TabAtom::Kind::Base ? 2.0 : 120.0;
    *space = size;
    return size <= 9.2e18;
}

std::uint64_t pack_values(const TabConstraintData& tc, const ClauseWindow& w,
                          const std::vector<int>& values) {
    std::uint64_t code = 0;
    for (std::size_t k = 0; k < w.atom_indices.size(); ++k) {
        bool is_base = tc.atoms[w.atom_indices[k]].kind == TabAtom::Kind::Base;
        code = code * (is_base ? 2 : kS5Order) +
               static_cast<std::uint64_t>(is_base ? (values[k] < 0 ? 0 : 1) : values[k]);
    }
    return code;
}

std::vector<int> unpack_values(const TabConstraintData& tc, const ClauseWindow& w,
                               std::uint64_t code) {
    std::vector<int> values(w.atom_indices.size());
    for (std::size_t k = w.atom_indices.size(); k-- > 0;) {
        bool is_base = tc.atoms[w.atom_indices[k]].kind == TabAtom::Kind::Base;
        int radix = is_base ? 2 : kS5Order;
        int v = static_cast<int>(code % radix);
        code /= radix;
        values[k] = is_base ? (v == 0 ? -1 : +1) : v;
    }
    return values;
}

// Code-keyed accumulation when both windows pack into one 64-bit key;
// string-keyed otherwise.
void accumulate_samples(const CompiledGame& g, const PairSampler& sampler,
                        std::uint64_t seed_base, std::uint64_t blocks, std::uint64_t samples,
                        bool parallel, SampleCounts& out) {
    const auto& tci = g.tableau().data().cons[sampler.left_constraint()];
    const auto& tck = g.tableau().data().cons[sampler.right_constraint()];
    const ClauseWindow& wl = sampler.left_window();
    const ClauseWindow& wr = sampler.right_window();
    double left_space = 0, right_space = 0;
    bool packable = window_radix(tci, wl, &left_space) && window_radix(tck, wr, &right_space) &&
                    left_space * right_space <= 9.2e18;

    if (packable) {
        std::uint64_t right_radix = static_cast<std::uint64_t>(right_space);
        std::unordered_map<std::uint64_t, std::uint64_t> merged;
        auto run_block = [&](long long block, std::unordered_map<std::uint64_t, std::uint64_t>& counts) {
            Rng rng(derive_seed(seed_base, static_cast<std::uint64_t>(block)));
            std::uint64_t start = static_cast<std::uint64_t>(block) * kSampleBlock;
            std::uint64_t n = std::min(kSampleBlock, samples - start);
            PairSampler::Draw draw;
            for (std::uint64_t k = 0; k < n; ++k) {
                sampler.sample_into(rng, draw);
                ++counts[pack_values(tci, wl, draw.left) * right_radix +
                         pack_values(tck, wr, draw.right)];
            }
        };
#ifdef _OPENMP
        if (parallel) {
#pragma omp parallel
            {
                std::unordered_map<std::uint64_t, std::uint64_t> local;
#pragma omp for schedule(static) nowait
                for (long long block = 0; block < static_cast<long long>(blocks); ++block)
                    run_block(block, local);
#pragma omp critical
                for (const auto& [key, count] : local) merged[key] += count;
            }
        } else
#endif
        {
            for (long long block = 0; block < static_cast<long long>(blocks); ++block)
                run_block(block, merged);
        }
        for (const auto& [key, count] : merged) {
            std::uint64_t code_l = key / right_radix, code_r = key % right_radix;
            out[{g.tableau().window_string(sampler.left_constraint(), wl,
                                           unpack_values(tci, wl, code_l)),
                 g.tableau().window_string(sampler.right_constraint(), wr,
                                           unpack_values(tck, wr, code_r))}] += count;
        }
        return;
    }

    auto run_block = [&](long long block, SampleCounts& counts) {
        Rng rng(derive_seed(seed_base, static_cast<std::uint64_t>(block)));
        std::uint64_t start = static_cast<std::uint64_t>(block) * kSampleBlock;
        std::uint64_t n = std::min(kSampleBlock, samples - start);
        for (std::uint64_t k = 0; k < n; ++k) {
            auto draw = sampler.sample(rng);
            ++counts[{sampler.left_string(draw), sampler.right_string(draw)}];
        }
    };
#ifdef _OPENMP
    if (parallel) {
#pragma omp parallel
        {
            SampleCounts local;
#pragma omp for schedule(static) nowait
            for (long long block = 0; block < static_cast<long long>(blocks); ++block)
                run_block(block, local);
#pragma omp critical
            for (const auto& [key, count] : local) out[key] += count;
        }
        return;
    }
#endif
    for (long long block = 0; block < static_cast<long long>(blocks); ++block)
        run_block(block, out);
}

}  // namespace

SampleCounts sample_counts_serial(const CompiledGame& g, int question_a, int question_b,
                                  std::uint64_t samples, std::uint64_t seed) {
    PairSampler sampler(g, question_a, question_b);
    SampleCounts counts;
    std::uint64_t blocks = (samples + kSampleBlock - 1) / kSampleBlock;
    accumulate_samples(g, sampler, seed, blocks, samples, false, counts);
    return counts;
}

SampleCounts sample_counts(const CompiledGame& g, int question_a, int question_b,
                           std::uint64_t samples, std::uint64_t seed) {
    PairSampler sampler(g, question_a, question_b);
    SampleCounts counts;
    std::uint64_t blocks = (samples + kSampleBlock - 1) / kSampleBlock;
    accumulate_samples(g, sampler, seed, blocks, samples, true, counts);
    return counts;
}

HonestTapes draw_honest_tapes(const CompiledGame& g, Rng& rng) {
    HonestTapes tapes;
    std::size_t tape_len =
        g.original().variables.size() * static_cast<std::size_t>(g.degree() - 1);
    tapes.share_tape.resize(tape_len);
    for (auto& s : tapes.share_tape) s = rng.coin() ? Sign(-1) : Sign(+1);
    for (int i = 0; i < g.tableau().m(); ++i) {
        std::vector<int> r(g.tableau().data().cons[i].randomizer_count());
        for (auto& value : r) value = static_cast<int>(rng.below(kS5Order));
        tapes.randomizers.push_back(std::move(r));
    }
    return tapes;
}

HonestProver::HonestProver(const CompiledGame& g, Assignment phi_star)
    : g_(&g), phi_star_(std::move(phi_star)) {
    if (!g.original().satisfied_by(phi_star_))
        throw NotSatisfying("the honest prover needs a satisfying assignment");
}

SignVec HonestProver::lifted_base(int constraint, const HonestTapes& tapes) const {
    const Bcs& b = g_->original();
    int degree = g_->degree();
    const VarList& inner_ctx = b.context(constraint);
    SignVec out(inner_ctx.size() * static_cast<std::size_t>(degree));
    for (std::size_t v = 0; v < inner_ctx.size(); ++v) {
        // Tape slots are variable-major over the full variable list.
        std::size_t var_index =
            std::find(b.variables.begin(), b.variables.end(), inner_ctx[v]) -
            b.variables.begin();
        auto tape = [&](int j) {
            return tapes.share_tape[var_index * (degree - 1) + (j - 1)];
        };
        Sign value = phi_star_.at(inner_ctx[v]);
        for (int c = 1; c <= degree; ++c) {
            Sign s;
            if (degree == 1) {
                s = value;
            } else if (c == 1) {
                s = static_cast<Sign>(value * tape(1));
            } else if (c < degree) {
                s = static_cast<Sign>(tape(c - 1) * tape(c));
            } else {
                s = tape(degree - 1);
            }
            out[v * degree + (c - 1)] = s;
        }
    }
    return out;
}

std::vector<int> HonestProver::answer_values(int question, const HonestTapes& tapes) const {
    auto [i, wj] = g_->question_to_window(question);
    const TableauSystem& tab = g_->tableau();
    SignVec base = lifted_base(i, tapes);
    std::vector<int> rows = tab.fill_rows(i, base, tapes.randomizers[i]);
    ClauseWindow w = tab.window(i, wj);
    const auto& tc = tab.data().cons[i];
    std::vector<int> values;
    values.reserve(w.atom_indices.size());
    for (int a : w.atom_indices) {
        const TabAtom& atom = tc.atoms[a];
        switch (atom.kind) {
            case TabAtom::Kind::Base: values.push_back(base[a]); break;
            case TabAtom::Kind::Entry:
                values.push_back(rows[(atom.p - 1) * tc.d + (atom.q - 1)]);
                break;
            case TabAtom::Kind::Randomizer:
                values.push_back(
                    tapes.randomizers[i][(atom.p - 1) * (tc.d - 1) + (atom.q - 1)]);
                break;
        }
    }
    return values;
}

std::string HonestProver::answer(int question, const HonestTapes& tapes) const {
    auto [i, wj] = g_->question_to_window(question);
    return g_->tableau().window_string(i, g_->tableau().window(i, wj),
                                       answer_values(question, tapes));
}

SharedRandomnessStrategy HonestProver::as_strategy() const {
    SharedRandomnessStrategy s;
    s.seed_count = Int(1) << 64;
    const CompiledGame* g = g_;
    Assignment star = phi_star_;
    s.answer = [g, star](const Int& seed, int question) {
        HonestProver prover(*g, star);
        Rng rng(seed.get_ui());
        HonestTapes tapes = draw_honest_tapes(*g, rng);
        auto [i, wj] = g->question_to_window(question);
        ClauseWindow w = g->tableau().window(i, wj);
        return Assignment::from_sign_string(g->tableau().window_bool_vars(i, w),
                                            prover.answer(question, tapes));
    };
    return s;
}

}  // namespace bcszk
