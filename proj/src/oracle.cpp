#include "bcszk/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

namespace bcszk {

// --- AnswerPairDistribution -------------------------------------------------

Rat AnswerPairDistribution::prob(const std::string& a, const std::string& b) const {
    if (factored) {
        auto la = left.find(a);
        auto rb = right.find(b);
        if (la == left.end() || rb == right.end()) return Rat(0);
        return la->second * rb->second;
    }
    auto it = joint.find({a, b});
    return it == joint.end() ? Rat(0) : it->second;
}

Int AnswerPairDistribution::support_size() const {
    if (factored) return Int(left.size()) * Int(right.size());
    return Int(joint.size());
}

Rat AnswerPairDistribution::total_mass() const {
    Rat total = 0;
    if (factored) {
        Rat l = 0, r = 0;
        for (const auto& [key, p] : left) l += p;
        for (const auto& [key, p] : right) r += p;
        return l * r;
    }
    for (const auto& [key, p] : joint) total += p;
    return total;
}

bool AnswerPairDistribution::same_distribution(const AnswerPairDistribution& other) const {
    if (factored && other.factored) {
        // Product measures agree iff the marginals agree.
        return left == other.left && right == other.right;
    }
    const AnswerPairDistribution* fact = factored ? this : (other.factored ? &other : nullptr);
    const AnswerPairDistribution* flat = factored ? &other : this;
    if (!fact) return joint == other.joint;
    if (fact->support_size() != flat->support_size()) return false;
    for (const auto& [key, p] : flat->joint)
        if (fact->prob(key.first, key.second) != p) return false;
    return true;
}

Int CodedPairDistribution::support_size() const {
    if (factored) return Int(left.size()) * Int(right.size());
    return Int(joint.size());
}

namespace {

bool marginals_equal(const std::map<std::uint64_t, Int>& a, const Int& a_total,
                     const std::map<std::uint64_t, Int>& b, const Int& b_total) {
    if (a.size() != b.size()) return false;
    auto ia = a.begin();
    for (auto ib = b.begin(); ib != b.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return false;
        if (ia->second * b_total != ib->second * a_total) return false;
    }
    return true;
}

}  // namespace

bool CodedPairDistribution::same_distribution(const CodedPairDistribution& other) const {
    if (right_space != other.right_space) return false;
    if (factored && other.factored)
        return marginals_equal(left, left_total, other.left, other.left_total) &&
               marginals_equal(right, right_total, other.right, other.right_total);
    const CodedPairDistribution* fact = factored ? this : (other.factored ? &other : nullptr);
    const CodedPairDistribution* flat = factored ? &other : this;
    if (!fact) {
        if (joint.size() != other.joint.size()) return false;
        auto ia = joint.begin();
        for (auto ib = other.joint.begin(); ib != other.joint.end(); ++ia, ++ib) {
            if (ia->first != ib->first) return false;
            if (ia->second * other.total != ib->second * total) return false;
        }
        return true;
    }
    if (fact->support_size() != flat->support_size()) return false;
    Int denom = fact->left_total * fact->right_total;
    for (const auto& [code, count] : flat->joint) {
        auto l = fact->left.find(code / fact->right_space);
        auto r = fact->right.find(code % fact->right_space);
        if (l == fact->left.end() || r == fact->right.end()) return false;
        if (count * denom != l->second * r->second * flat->total) return false;
    }
    return true;
}

// --- the seed/word engine ----------------------------------------------------

namespace {

enum class Mode { CaseA, CaseB, Honest };

struct SeedDef {
    char kind;  // 's' sign, 'p' permutation, 'c' choice
    int card;
    std::string id;
};

// A product of signs: a constant, an optional satisfying-row lookup (Case B),
// and sign seeds with XOR cancellation.
struct SignX {
    int const_sign = +1;
    std::vector<int> seeds;  // sorted; duplicates cancel
    int choice_seed = -1;
    int choice_pos = -1;
    int choice_constraint = -1;

    void mul_seed(int s) {
        auto it = std::lower_bound(seeds.begin(), seeds.end(), s);
        if (it != seeds.end() && *it == s)
            seeds.erase(it);
        else
            seeds.insert(it, s);
    }
    bool operator==(const SignX&) const = default;
};

struct CenterX {
    int constraint;
    int q;  // 1-based instruction
    SignX sign;
    bool operator==(const CenterX&) const = default;
};

struct GenX {
    bool is_center;
    int index;
    bool inv;
    bool cancels(const GenX& other) const {
        return is_center == other.is_center && index == other.index && inv != other.inv;
    }
};
using Word = std::vector<GenX>;

void free_reduce(Word& w) {
    Word out;
    for (const auto& g : w) {
        if (!out.empty() && out.back().cancels(g))
            out.pop_back();
        else
            out.push_back(g);
    }
    w = std::move(out);
}

struct NodeX {
    std::string key;  // dedup key
    Word word;
};

// Per-side description of how base slots evaluate.
struct BaseModel {
    Mode mode;
    int constraint = -1;                 // Case B namespace
    const Bcs* original = nullptr;       // Honest / Case B
    const Assignment* phi_star = nullptr;  // Honest
};

class Plan {
  public:
    Plan(const CompiledGame& g, const Limits& limits) : g_(&g), limits_(&limits) {}

    int sign_seed(const std::string& id) { return seed_index('s', 2, id); }
    int perm_seed(const std::string& id) { return seed_index('p', kS5Order, id); }
    int choice_seed(const std::string& id, int card) { return seed_index('c', card, id); }

    // Satisfying rows of the inner (pre-obliviation) constraint.
    const std::vector<SignVec>& inner_rows(int constraint) {
        auto it = rows_.find(constraint);
        if (it != rows_.end()) return it->second;
        const auto& tc = g_->tableau().data().cons[constraint];
        const auto& body = dynamic_cast<const ObliviatedBody&>(tc.base.body());
        return rows_.emplace(constraint, body.inner().enumerate_satisfying_signs(*limits_))
            .first->second;
    }

    // Sign expression for base slot `pos` (index into the obliviated context)
    // of `constraint` under the model.
    SignX base_slot(int constraint, int pos, const BaseModel& model) {
        const auto& tc = g_->tableau().data().cons[constraint];
        const std::string& share = tc.base.context()[pos];
        SignX x;
        if (model.mode == Mode::CaseA) {
            x.mul_seed(sign_seed("z:" + share));
            return x;
        }
        int degree = g_->degree();
        int var = pos / degree;
        int copy = pos % degree + 1;  // 1-based share index
        std::string var_name =
            dynamic_cast<const ObliviatedBody&>(tc.base.body()).inner().context()[var];
        std::string ns = model.mode == Mode::CaseB
                             ? "y:" + std::to_string(constraint + 1) + ":"
                             : "y:";
        auto tape = [&](int j) { return sign_seed(ns + var_name + ":" + std::to_string(j)); };
        if (model.mode == Mode::CaseB) {
            int card = static_cast<int>(inner_rows(constraint).size());
            x.choice_seed = choice_seed("phi:" + std::to_string(constraint + 1), card);
            x.choice_pos = var;
            x.choice_constraint = constraint;
        } else {
            x.const_sign = model.phi_star->at(var_name);
        }
        bool carries_value = (copy == 1);
        if (!carries_value) {
            x.const_sign = +1;
            x.choice_seed = -1;
            x.choice_pos = -1;
            x.choice_constraint = -1;
        }
        if (degree == 1) return x;
        if (copy == 1) {
            x.mul_seed(tape(1));
        } else if (copy < degree) {
            x.mul_seed(tape(copy - 1));
            x.mul_seed(tape(copy));
        } else {
            x.mul_seed(tape(degree - 1));
        }
        return x;
    }

    int center(int constraint, int q, const BaseModel& model) {
        const auto& tc = g_->tableau().data().cons[constraint];
        SignX sign = base_slot(constraint, tc.instr_var_pos[q - 1], model);
        CenterX c{constraint, q, std::move(sign)};
        std::string ns = model.mode == Mode::CaseB ? "B" : (model.mode == Mode::Honest ? "H" : "A");
        std::string key = ns + ":" + std::to_string(constraint) + ":" + std::to_string(q);
        auto it = center_index_.find(key);
        if (it != center_index_.end()) return it->second;
        centers_.push_back(std::move(c));
        return center_index_[key] = static_cast<int>(centers_.size()) - 1;
    }

    // Node (perm-valued atom) for entry/randomizer atoms; base atoms are
    // SignX members. Nodes are deduplicated so the same atom appearing in
    // both windows evaluates once.
    int atom_node(int constraint, const TabAtom& atom, const BaseModel& model) {
        std::string ns = model.mode == Mode::CaseB ? "B" : (model.mode == Mode::Honest ? "H" : "A");
        std::string key = ns + ":" + std::to_string(constraint) + ":" + atom.name(constraint + 1);
        auto it = node_index_.find(key);
        if (it != node_index_.end()) return it->second;

        const auto& tc = g_->tableau().data().cons[constraint];
        auto prefix = [&](int level, int column) {
            // P_level(column) = r(1,column) ... r(level,column); boundary
            // columns are the identity and contribute nothing.
            return perm_seed("P:" + std::to_string(constraint + 1) + ":" +
                             std::to_string(level) + ":" + std::to_string(column));
        };
        Word w;
        if (atom.kind == TabAtom::Kind::Entry) {
            if (atom.p >= 2 && atom.q >= 2) w.push_back({false, prefix(atom.p - 1, atom.q - 1), true});
            w.push_back({true, center(constraint, atom.q, model), false});
            if (atom.p >= 2 && atom.q <= tc.d - 1)
                w.push_back({false, prefix(atom.p - 1, atom.q), false});
        } else {
            if (atom.p >= 2) w.push_back({false, prefix(atom.p - 1, atom.q), true});
            w.push_back({false, prefix(atom.p, atom.q), false});
        }
        nodes_.push_back({key, std::move(w)});
        return node_index_[key] = static_cast<int>(nodes_.size()) - 1;
    }

    // Registers a window; members become node/sign references.
    struct Member {
        bool is_sign;
        int index;    // node index or sign index
        int radix;    // 2 or 120
    };
    std::vector<Member> window_members(int constraint, const ClauseWindow& w,
                                       const BaseModel& model) {
        std::vector<Member> members;
        const auto& tc = g_->tableau().data().cons[constraint];
        for (int a : w.atom_indices) {
            const TabAtom& atom = tc.atoms[a];
            if (atom.kind == TabAtom::Kind::Base) {
                signs_.push_back(base_slot(constraint, a, model));
                members.push_back({true, static_cast<int>(signs_.size()) - 1, 2});
            } else {
                members.push_back({false, atom_node(constraint, atom, model), kS5Order});
            }
        }
        return members;
    }

    // --- reduction ---------------------------------------------------------

    void reduce(std::uint64_t soft_target);
    double cone_size() const;
    Int cone_size_exact() const;

    // --- enumeration ---------------------------------------------------------

    // Calls sink(left_code, right_code) for every seed tuple; codes are the
    // mixed-radix packings of the member values.
    template <typename Sink>
    void enumerate(const std::vector<Member>& left, const std::vector<Member>& right,
                   Sink&& sink);

    Int tuple_count() const { return cone_size_exact(); }

    std::set<std::string> referenced_ids() const {
        std::set<std::string> out;
        for (int s : referenced_seeds()) out.insert(seeds_[s].id);
        return out;
    }

    std::vector<int> decode(const std::vector<Member>& members, std::uint64_t code) const {
        std::vector<int> values(members.size());
        for (std::size_t k = members.size(); k-- > 0;) {
            values[k] = static_cast<int>(code % members[k].radix);
            code /= members[k].radix;
        }
        // Sign members decode 0 -> -1, 1 -> +1.
        for (std::size_t k = 0; k < members.size(); ++k)
            if (members[k].is_sign) values[k] = values[k] == 0 ? -1 : +1;
        return values;
    }

  private:
    int seed_index(char kind, int card, const std::string& id) {
        auto it = seed_index_.find(id);
        if (it != seed_index_.end()) return it->second;
        seeds_.push_back({kind, card, id});
        return seed_index_[id] = static_cast<int>(seeds_.size()) - 1;
    }

    std::vector<int> referenced_seeds() const;

    const CompiledGame* g_;
    const Limits* limits_;
    std::vector<SeedDef> seeds_;
    std::unordered_map<std::string, int> seed_index_;
    std::vector<CenterX> centers_;
    std::unordered_map<std::string, int> center_index_;
    std::vector<NodeX> nodes_;
    std::unordered_map<std::string, int> node_index_;
    std::vector<SignX> signs_;  // window base members
    std::map<int, std::vector<SignVec>> rows_;
};

std::vector<int> Plan::referenced_seeds() const {
    std::vector<char> used(seeds_.size(), 0);
    for (const auto& node : nodes_)
        for (const auto& g : node.word)
            if (!g.is_center) used[g.index] = 1;
    auto mark_sign = [&](const SignX& x) {
        for (int s : x.seeds) used[s] = 1;
        if (x.choice_seed >= 0) used[x.choice_seed] = 1;
    };
    // Only centers that survive in some word matter.
    std::vector<char> center_used(centers_.size(), 0);
    for (const auto& node : nodes_)
        for (const auto& g : node.word)
            if (g.is_center) center_used[g.index] = 1;
    for (std::size_t c = 0; c < centers_.size(); ++c)
        if (center_used[c]) mark_sign(centers_[c].sign);
    for (const auto& x : signs_) mark_sign(x);
    std::vector<int> out;
    for (std::size_t s = 0; s < seeds_.size(); ++s)
        if (used[s]) out.push_back(static_cast<int>(s));
    return out;
}

double Plan::cone_size() const {
    double size = 1;
    for (int s : referenced_seeds()) size *= seeds_[s].card;
    return size;
}

Int Plan::cone_size_exact() const {
    Int size = 1;
    for (int s : referenced_seeds()) size *= seeds_[s].card;
    return size;
}

void Plan::reduce(std::uint64_t soft_target) {
    // Sign-level: a sign expression owning a sign seed nobody else uses is
    // itself uniform and independent; swap it for a fresh seed.
    auto sign_usage = [&]() {
        std::map<int, int> usage;
        std::vector<char> center_used(centers_.size(), 0);
        for (const auto& node : nodes_)
            for (const auto& g : node.word)
                if (g.is_center) center_used[g.index] = 1;
        for (std::size_t c = 0; c < centers_.size(); ++c)
            if (center_used[c])
                for (int s : centers_[c].sign.seeds) ++usage[s];
        for (const auto& x : signs_)
            for (int s : x.seeds) ++usage[s];
        return usage;
    };
    {
        auto usage = sign_usage();
        int fresh_counter = 0;
        for (auto& x : signs_) {
            if (x.seeds.empty()) continue;
            for (int s : x.seeds) {
                if (usage[s] == 1) {
                    for (int other : x.seeds) --usage[other];
                    x = SignX{};
                    x.mul_seed(sign_seed("fresh_sign:" + std::to_string(fresh_counter++)));
                    break;
                }
            }
        }
    }

    // Word-level eliminations while the cone stays over target.
    int fresh_counter = 0;
    for (int round = 0; round < 256 && cone_size() > static_cast<double>(soft_target);
         ++round) {
        // Usage of perm seeds across all words.
        std::map<int, int> usage;
        for (const auto& node : nodes_)
            for (const auto& g : node.word)
                if (!g.is_center) ++usage[g.index];

        int best_node = -1, best_pos = -1, best_external = -1;
        for (std::size_t n = 0; n < nodes_.size(); ++n) {
            const Word& w = nodes_[n].word;
            if (w.size() == 1 && !w[0].is_center && !w[0].inv) continue;  // already atomic
            for (std::size_t pos = 0; pos < w.size(); ++pos) {
                if (w[pos].is_center) continue;
                int in_node = 0;
                for (const auto& g : w)
                    if (!g.is_center && g.index == w[pos].index) ++in_node;
                if (in_node != 1) continue;
                int external = usage[w[pos].index] - 1;
                if (best_node < 0 || external < best_external) {
                    best_node = static_cast<int>(n);
                    best_pos = static_cast<int>(pos);
                    best_external = external;
                }
            }
            if (best_external == 0) break;  // cannot do better than a pure collapse
        }
        if (best_node < 0) break;

        Word& w = nodes_[best_node].word;
        GenX target = w[best_pos];
        int fresh = perm_seed("fresh:" + std::to_string(fresh_counter++));
        // word = u . s^e . v  =>  s = u^-1 fresh v^-1   (e = +1)
        //                         s = v fresh^-1 u      (e = -1)
        Word u(w.begin(), w.begin() + best_pos);
        Word v(w.begin() + best_pos + 1, w.end());
        auto inverse_of = [](const Word& word) {
            Word out;
            for (auto it = word.rbegin(); it != word.rend(); ++it)
                out.push_back({it->is_center, it->index, !it->inv});
            return out;
        };
        Word solved;
        if (!target.inv) {
            solved = inverse_of(u);
            solved.push_back({false, fresh, false});
            Word vi = inverse_of(v);
            solved.insert(solved.end(), vi.begin(), vi.end());
        } else {
            solved = v;
            solved.push_back({false, fresh, true});
            solved.insert(solved.end(), u.begin(), u.end());
        }
        Word solved_inv;
        for (auto it = solved.rbegin(); it != solved.rend(); ++it)
            solved_inv.push_back({it->is_center, it->index, !it->inv});

        for (std::size_t n = 0; n < nodes_.size(); ++n) {
            if (static_cast<int>(n) == best_node) continue;
            Word out;
            for (const auto& g : nodes_[n].word) {
                if (!g.is_center && g.index == target.index) {
                    const Word& repl = g.inv ? solved_inv : solved;
                    out.insert(out.end(), repl.begin(), repl.end());
                } else {
                    out.push_back(g);
                }
            }
            free_reduce(out);
            nodes_[n].word = std::move(out);
        }
        w = {{false, fresh, false}};
    }
}

template <typename Sink>
void Plan::enumerate(const std::vector<Member>& left, const std::vector<Member>& right,
                     Sink&& sink) {
    std::vector<int> active = referenced_seeds();
    // Canonical deterministic order: by id.
    std::sort(active.begin(), active.end(),
              [&](int a, int b) { return seeds_[a].id < seeds_[b].id; });

    std::vector<int> seed_value(seeds_.size(), 0);
    std::vector<int> center_value(centers_.size(), 0);
    std::vector<int> node_value(nodes_.size(), 0);
    std::vector<int> sign_value(signs_.size(), +1);

    std::vector<char> center_used(centers_.size(), 0);
    for (const auto& node : nodes_)
        for (const auto& g : node.word)
            if (g.is_center) center_used[g.index] = 1;

    auto eval_sign = [&](const SignX& x) {
        int sign = x.const_sign;
        for (int s : x.seeds) sign *= seed_value[s] == 0 ? -1 : +1;
        if (x.choice_seed >= 0)
            sign *= rows_.at(x.choice_constraint)[seed_value[x.choice_seed]][x.choice_pos];
        return sign;
    };

    auto eval_all = [&]() {
        for (std::size_t c = 0; c < centers_.size(); ++c) {
            if (!center_used[c]) continue;
            const CenterX& center = centers_[c];
            const auto& tc = g_->tableau().data().cons[center.constraint];
            center_value[c] = tc.instr_perm[center.q - 1][eval_sign(center.sign) < 0 ? 1 : 0];
        }
        for (std::size_t n = 0; n < nodes_.size(); ++n) {
            int value = 0;
            for (const auto& g : nodes_[n].word) {
                int factor = g.is_center ? center_value[g.index] : seed_value[g.index];
                if (g.inv) factor = s5_inv(factor);
                value = s5_mul(value, factor);
            }
            node_value[n] = value;
        }
        for (std::size_t s = 0; s < signs_.size(); ++s) sign_value[s] = eval_sign(signs_[s]);
    };

    auto pack = [&](const std::vector<Member>& members) {
        std::uint64_t code = 0;
        for (const auto& member : members) {
            int value = member.is_sign ? (sign_value[member.index] < 0 ? 0 : 1)
                                       : node_value[member.index];
            code = code * member.radix + static_cast<std::uint64_t>(value);
        }
        return code;
    };

    std::vector<int> odometer(active.size(), 0);
    for (;;) {
        eval_all();
        sink(pack(left), pack(right));
        std::size_t level = active.size();
        while (level > 0) {
            int s = active[level - 1];
            if (++seed_value[s] < seeds_[s].card) break;
            seed_value[s] = 0;
            --level;
        }
        if (level == 0) break;
    }
}

// Decoded member values back to the window's sign string.
std::string values_to_window_string(const CompiledGame& g, int constraint,
                                    const ClauseWindow& w, const std::vector<int>& values) {
    return g.tableau().window_string(constraint, w, values);
}

// Packing overflow guard: the mixed-radix code of a window must fit 64 bits.
void check_packable(const std::vector<Plan::Member>& members) {
    long double size = 1;
    for (const auto& member : members) size *= member.radix;
    if (size > 9.2e18L)
        throw BudgetExceeded("window answer space too large to tabulate");
}

constexpr std::uint64_t kReduceTarget = 1 << 16;

std::uint64_t member_space(const std::vector<Plan::Member>& members) {
    long double space = 1;
    for (const auto& member : members) space *= member.radix;
    return static_cast<std::uint64_t>(space);
}

// Joint enumeration into coded counts (the engine's native form).
void enumerate_pair_coded(Plan& plan, const std::vector<Plan::Member>& left,
                          const std::vector<Plan::Member>& right, const Limits& limits,
                          CodedPairDistribution& out) {
    plan.reduce(kReduceTarget);
    Int cone = plan.cone_size_exact();
    if (cone > Int(static_cast<unsigned long>(limits.oracle_budget)))
        throw BudgetExceeded("seed cone of size " + cone.get_str());
    check_packable(left);
    check_packable(right);
    long double pair_space =
        static_cast<long double>(member_space(left)) * member_space(right);
    if (pair_space > 9.2e18L) throw BudgetExceeded("answer pair code space too large");

    out.factored = false;
    out.right_space = member_space(right);
    out.total = plan.tuple_count();
    std::unordered_map<std::uint64_t, std::uint64_t> counts;
    plan.enumerate(left, right, [&](std::uint64_t a, std::uint64_t b) {
        ++counts[a * out.right_space + b];
    });
    for (const auto& [code, count] : counts) out.joint[code] = Int(count);
}

std::map<std::uint64_t, Int> enumerate_marginal_coded(Plan& plan,
                                                      const std::vector<Plan::Member>& members,
                                                      const Limits& limits, Int& total) {
    plan.reduce(kReduceTarget);
    Int cone = plan.cone_size_exact();
    if (cone > Int(static_cast<unsigned long>(limits.oracle_budget)))
        throw BudgetExceeded("seed cone of size " + cone.get_str());
    check_packable(members);
    std::unordered_map<std::uint64_t, std::uint64_t> counts;
    plan.enumerate(members, {}, [&](std::uint64_t a, std::uint64_t) { ++counts[a]; });
    total = plan.tuple_count();
    std::map<std::uint64_t, Int> out;
    for (const auto& [code, count] : counts) out[code] = Int(count);
    return out;
}

// Closed-form marginal of a row-4 product window: uniform over the tuples
// with the fixed product. Cross-checked against raw enumeration in the
// acceptance suite.
std::map<std::uint64_t, Int> type3_marginal_coded(const CompiledGame& g, int constraint,
                                                  const ClauseWindow& w, const Limits& limits,
                                                  Int& total) {
    const auto& tc = g.tableau().data().cons[constraint];
    int d = tc.d;
    double support = std::pow(120.0, d - 1);
    if (support > static_cast<double>(limits.oracle_budget))
        throw BudgetExceeded("row-4 product support of size 120^" + std::to_string(d - 1));
    (void)w;
    total = 1;
    for (int q = 1; q < d; ++q) total *= kS5Order;
    std::map<std::uint64_t, Int> out;
    std::vector<int> free(d - 1, 0);
    for (;;) {
        int product = 0;
        std::uint64_t code = 0;
        for (int q = 0; q < d - 1; ++q) {
            code = code * kS5Order + static_cast<std::uint64_t>(free[q]);
            product = s5_mul(product, free[q]);
        }
        code = code * kS5Order + static_cast<std::uint64_t>(s5_mul(s5_inv(product), tc.sigma));
        out[code] = 1;
        int level = d - 1;
        while (level > 0) {
            if (++free[level - 1] < kS5Order) break;
            free[level - 1] = 0;
            --level;
        }
        if (level == 0) break;
    }
    return out;
}

struct PairContext {
    int ci, wa_index, ck, wb_index;
    ClauseWindow wa, wb;
    bool case_b;
};

PairContext pair_context(const CompiledGame& g, int qa, int qb) {
    PairContext ctx{};
    std::tie(ctx.ci, ctx.wa_index) = g.question_to_window(qa);
    std::tie(ctx.ck, ctx.wb_index) = g.question_to_window(qb);
    ctx.wa = g.tableau().window(ctx.ci, ctx.wa_index);
    ctx.wb = g.tableau().window(ctx.ck, ctx.wb_index);
    ctx.case_b = ctx.wa.type == 3 || ctx.wb.type == 3;
    return ctx;
}

std::map<std::uint64_t, Int> window_marginal_coded(const CompiledGame& g, int constraint,
                                                   const ClauseWindow& w, Mode mode,
                                                   const Assignment* phi_star,
                                                   const Limits& limits, Int& total) {
    if (w.type == 3 && mode != Mode::Honest)
        return type3_marginal_coded(g, constraint, w, limits, total);
    Plan plan(g, limits);
    BaseModel model{mode, constraint, &g.original(), phi_star};
    auto members = plan.window_members(constraint, w, model);
    return enumerate_marginal_coded(plan, members, limits, total);
}

CodedPairDistribution distribution_coded_impl(const CompiledGame& g, int qa, int qb,
                                              Mode honest_mode, const Assignment* phi_star,
                                              const Limits& limits) {
    PairContext ctx = pair_context(g, qa, qb);
    bool honest = honest_mode == Mode::Honest;
    CodedPairDistribution out;
    {
        // right_space is a fixed property of the right window.
        Plan probe(g, limits);
        BaseModel model{Mode::CaseA, -1, &g.original(), nullptr};
        out.right_space = member_space(probe.window_members(ctx.ck, ctx.wb, model));
    }

    // Honest provers answer both questions from one shared tape; everything
    // stays in one plan (shared y/randomizer seeds correlate the sides).
    if (honest) {
        Plan plan(g, limits);
        BaseModel model{Mode::Honest, -1, &g.original(), phi_star};
        auto left = plan.window_members(ctx.ci, ctx.wa, model);
        auto right = plan.window_members(ctx.ck, ctx.wb, model);
        enumerate_pair_coded(plan, left, right, limits, out);
        return out;
    }

    if (ctx.case_b) {
        if (ctx.ci != ctx.ck) {
            // Independent satisfying draws per constraint.
            out.factored = true;
            out.left = window_marginal_coded(g, ctx.ci, ctx.wa, Mode::CaseB, nullptr, limits,
                                             out.left_total);
            out.right = window_marginal_coded(g, ctx.ck, ctx.wb, Mode::CaseB, nullptr, limits,
                                              out.right_total);
            return out;
        }
        Plan plan(g, limits);
        BaseModel model{Mode::CaseB, ctx.ci, &g.original(), nullptr};
        auto left = plan.window_members(ctx.ci, ctx.wa, model);
        auto right = plan.window_members(ctx.ck, ctx.wb, model);
        enumerate_pair_coded(plan, left, right, limits, out);
        return out;
    }

    // Case A: one global draw. Seeds are shared by name, so a joint plan is
    // exact; when the two sides touch disjoint seed sets the result factors.
    Plan plan(g, limits);
    BaseModel model{Mode::CaseA, -1, &g.original(), nullptr};
    auto left = plan.window_members(ctx.ci, ctx.wa, model);
    auto right = plan.window_members(ctx.ck, ctx.wb, model);
    if (ctx.ci != ctx.ck) {
        Plan probe_left(g, limits), probe_right(g, limits);
        auto ml = probe_left.window_members(ctx.ci, ctx.wa, model);
        auto mr = probe_right.window_members(ctx.ck, ctx.wb, model);
        auto ids_left = probe_left.referenced_ids();
        auto ids_right = probe_right.referenced_ids();
        bool disjoint = true;
        for (const auto& id : ids_left)
            if (ids_right.count(id)) {
                disjoint = false;
                break;
            }
        if (disjoint) {
            out.factored = true;
            out.left = enumerate_marginal_coded(probe_left, ml, limits, out.left_total);
            out.right = enumerate_marginal_coded(probe_right, mr, limits, out.right_total);
            return out;
        }
    }
    enumerate_pair_coded(plan, left, right, limits, out);
    return out;
}

// String materialization of a coded distribution; guarded because the
// joint supports of the worst pairs reach millions of entries.
constexpr std::uint64_t kStringSupportCap = 1 << 21;

AnswerPairDistribution stringify(const CompiledGame& g, const PairContext& ctx,
                                 const CodedPairDistribution& coded) {
    if (coded.support_size() > Int(kStringSupportCap))
        throw BudgetExceeded("support of " + coded.support_size().get_str() +
                             " entries is too large for the string table");
    const auto& tci = g.tableau().data().cons[ctx.ci];
    const auto& tck = g.tableau().data().cons[ctx.ck];
    auto decode_window = [&](const TabConstraintData& tc, const ClauseWindow& w,
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
    };
    AnswerPairDistribution out;
    out.factored = coded.factored;
    if (coded.factored) {
        for (const auto& [code, count] : coded.left) {
            Rat p(count, coded.left_total);
            p.canonicalize();
            out.left[g.tableau().window_string(ctx.ci, ctx.wa,
                                               decode_window(tci, ctx.wa, code))] += p;
        }
        for (const auto& [code, count] : coded.right) {
            Rat p(count, coded.right_total);
            p.canonicalize();
            out.right[g.tableau().window_string(ctx.ck, ctx.wb,
                                                decode_window(tck, ctx.wb, code))] += p;
        }
        return out;
    }
    for (const auto& [code, count] : coded.joint) {
        Rat p(count, coded.total);
        p.canonicalize();
        out.joint[{g.tableau().window_string(ctx.ci, ctx.wa,
                                             decode_window(tci, ctx.wa,
                                                           code / coded.right_space)),
                   g.tableau().window_string(ctx.ck, ctx.wb,
                                             decode_window(tck, ctx.wb,
                                                           code % coded.right_space))}] += p;
    }
    return out;
}

}  // namespace

CodedPairDistribution exact_distribution_coded(const CompiledGame& g, int question_a,
                                               int question_b, const Limits& limits) {
    return distribution_coded_impl(g, question_a, question_b, Mode::CaseA, nullptr, limits);
}

AnswerPairDistribution exact_distribution(const CompiledGame& g, int question_a, int question_b,
                                          const Limits& limits) {
    PairContext ctx = pair_context(g, question_a, question_b);
    return stringify(g, ctx,
                     distribution_coded_impl(g, question_a, question_b, Mode::CaseA, nullptr,
                                             limits));
}

AnswerPairDistribution honest_exact_distribution(const CompiledGame& g,
                                                 const Assignment& phi_star, int question_a,
                                                 int question_b, const Limits& limits) {
    if (!g.original().satisfied_by(phi_star))
        throw NotSatisfying("the honest oracle needs a satisfying assignment");
    PairContext ctx = pair_context(g, question_a, question_b);
    return stringify(g, ctx,
                     distribution_coded_impl(g, question_a, question_b, Mode::Honest, &phi_star,
                                             limits));
}

// --- zk_check ----------------------------------------------------------------

namespace {

using EmpiricalTable = SampleCounts;

// The verifier distribution parameter is part of the interface on purpose:
// building a table must not depend on it, and zk_check verifies that by
// calling this with different distributions and comparing bytes.
EmpiricalTable empirical_table(const CompiledGame& g, int qa, int qb, std::uint64_t samples,
                               std::uint64_t seed, const QuestionDistribution& verifier_pi) {
    (void)verifier_pi;  // never read: the sampler sees only the pair and the seed
    return sample_counts(g, qa, qb, samples, seed);
}

std::string table_bytes(const EmpiricalTable& table) {
    std::string out;
    for (const auto& [key, count] : table)
        out += key.first + "|" + key.second + "=" + std::to_string(count) + ";";
    return out;
}

Rat tv_distance(const EmpiricalTable& counts, std::uint64_t samples,
                const AnswerPairDistribution& oracle) {
    // TV = (sum over observed |c/N - p| + unobserved oracle mass) / 2.
    Rat sum_abs = 0;
    Rat observed_mass = 0;
    for (const auto& [key, count] : counts) {
        Rat empirical(static_cast<unsigned long>(count), static_cast<unsigned long>(samples));
        empirical.canonicalize();
        Rat p = oracle.prob(key.first, key.second);
        observed_mass += p;
        Rat diff = empirical - p;
        if (diff < 0) diff = -diff;
        sum_abs += diff;
    }
    return (sum_abs + (oracle.total_mass() - observed_mass)) / 2;
}

}  // namespace

ZkReport zk_check(const CompiledGame& g, std::uint64_t samples_per_pair, std::uint64_t seed,
                  const Limits& limits, std::vector<std::pair<int, int>> pair_list) {
    if (pair_list.empty()) {
        for (int a = 0; a < g.question_count(); ++a)
            for (int b = a; b < g.question_count(); ++b) pair_list.push_back({a, b});
    }
    ZkReport report;
    report.samples_per_pair = samples_per_pair;
    report.all_ok = true;
    report.pi_prime_invariant = true;

    // Two verifier distributions for the independence check: the game's own
    // subdivided distribution and a uniform stand-in a dishonest verifier
    // might use.
    const QuestionDistribution& pi_honest = g.sub_pi();
    QuestionDistribution pi_prime = QuestionDistribution::uniform(g.question_count());

    for (const auto& [qa, qb] : pair_list) {
        AnswerPairDistribution oracle = exact_distribution(g, qa, qb, limits);
        std::uint64_t pair_seed = derive_seed(seed, (static_cast<std::uint64_t>(qa) << 32) |
                                                        static_cast<std::uint64_t>(qb));
        std::uint64_t n = samples_per_pair;
        EmpiricalTable counts = empirical_table(g, qa, qb, n, pair_seed, pi_honest);
        {
            // Identity of the per-pair tables under a different verifier
            // distribution, at a capped sample count per pair.
            std::uint64_t check_n = std::min<std::uint64_t>(n, 100000);
            EmpiricalTable honest_view = empirical_table(g, qa, qb, check_n, pair_seed, pi_honest);
            EmpiricalTable prime_view = empirical_table(g, qa, qb, check_n, pair_seed, pi_prime);
            if (table_bytes(prime_view) != table_bytes(honest_view))
                report.pi_prime_invariant = false;
        }
        Rat tv = tv_distance(counts, n, oracle);
        double support = rat_to_double(Rat(oracle.support_size()));
        double threshold = 3.0 * std::sqrt(support / static_cast<double>(n));
        bool ok = rat_to_double(tv) <= threshold;
        if (!ok) {
            // One rerun at 10x before declaring failure.
            n = samples_per_pair * 10;
            counts = empirical_table(g, qa, qb, n, derive_seed(pair_seed, 1), pi_honest);
            tv = tv_distance(counts, n, oracle);
            threshold = 3.0 * std::sqrt(support / static_cast<double>(n));
            ok = rat_to_double(tv) <= threshold;
        }
        report.pairs.push_back({qa, qb, tv, oracle.support_size(), n, threshold, ok});
        report.all_ok = report.all_ok && ok;
    }
    return report;
}

std::string zk_report_to_json(const ZkReport& report) {
    Json doc;
    Json pairs = Json::array();
    for (const auto& pair : report.pairs) {
        Json entry;
        entry["pair"] = std::to_string(pair.question_a + 1) + "," +
                        std::to_string(pair.question_b + 1);
        entry["tv_distance"] = rat_to_decimal_string(pair.tv, 12);
        entry["support_size"] = pair.support.get_str();
        entry["samples"] = pair.samples;
        entry["threshold"] = pair.threshold;
        entry["verdict"] = pair.ok ? "ok" : "flagged";
        pairs.push_back(entry);
    }
    doc["pairs"] = pairs;
    doc["samples_per_pair"] = report.samples_per_pair;
    doc["pi_prime_invariant"] = report.pi_prime_invariant;
    doc["all_ok"] = report.all_ok;
    return doc.dump();
}

}  // namespace bcszk
