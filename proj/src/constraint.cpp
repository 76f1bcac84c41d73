#include "bcszk/constraint.hpp"

#include <algorithm>
#include <unordered_map>

namespace bcszk {

std::string signs_to_string(const SignVec& signs) {
    std::string s;
    s.reserve(signs.size());
    for (Sign v : signs) s.push_back(sign_to_char(v));
    return s;
}

SignVec string_to_signs(const std::string& text) {
    SignVec s;
    s.reserve(text.size());
    for (char c : text) s.push_back(char_to_sign(c));
    return s;
}

SignVec signvec_from_ordinal(std::uint64_t ordinal, int k) {
    SignVec s(k);
    for (int i = 0; i < k; ++i) {
        int shift = k - 1 - i;
        s[i] = ((ordinal >> shift) & 1ULL) ? Sign(+1) : Sign(-1);
    }
    return s;
}

std::uint64_t signvec_to_ordinal(const SignVec& signs) {
    std::uint64_t o = 0;
    for (Sign v : signs) o = (o << 1) | (v > 0 ? 1ULL : 0ULL);
    return o;
}

Constraint::Constraint(VarList context, std::shared_ptr<const ConstraintBody> body)
    : context_(std::move(context)), body_(std::move(body)) {}

Constraint Constraint::table(VarList context, std::vector<SignVec> satisfying) {
    int arity = static_cast<int>(context.size());
    return Constraint(std::move(context),
                      std::make_shared<TableBody>(arity, std::move(satisfying)));
}

Constraint Constraint::full(VarList context) {
    int arity = static_cast<int>(context.size());
    return Constraint(std::move(context), std::make_shared<FullBody>(arity));
}

Constraint Constraint::unit(VarList context, const std::string& var, Sign value) {
    auto it = std::find(context.begin(), context.end(), var);
    if (it == context.end()) throw UnknownVariable(var);
    int pos = static_cast<int>(it - context.begin());
    int k = static_cast<int>(context.size());
    std::vector<SignVec> sat;
    for (std::uint64_t o = 0; o < (1ULL << k); ++o) {
        SignVec s = signvec_from_ordinal(o, k);
        if (s[pos] == value) sat.push_back(std::move(s));
    }
    return table(std::move(context), std::move(sat));
}

bool Constraint::contains_signs(const SignVec& signs) const {
    if (static_cast<int>(signs.size()) != arity())
        throw DomainMismatch("sign vector arity mismatch");
    return body_->contains(signs);
}

bool Constraint::contains(const Assignment& phi) const {
    SignVec signs;
    signs.reserve(context_.size());
    for (const auto& v : context_) signs.push_back(phi.at(v));
    return body_->contains(signs);
}

bool Constraint::accepts(const Assignment& phi) const {
    if (!phi.binds_exactly(context_)) return false;
    return contains(phi);
}

Int Constraint::count_satisfying(const Limits& limits) const {
    if (auto c = body_->count()) return *c;
    return Int(enumerate_satisfying_signs(limits).size());
}

std::vector<SignVec> Constraint::enumerate_satisfying_signs(const Limits& limits) const {
    if (cache_) return *cache_;
    std::vector<SignVec> out;
    if (const auto* t = body_->table()) {
        out = *t;
    } else {
        int k = arity();
        if (k > limits.enumeration_bound_vars)
            throw TooLarge("cannot enumerate constraint on " + std::to_string(k) + " variables");
        for (std::uint64_t o = 0; o < (1ULL << k); ++o) {
            SignVec s = signvec_from_ordinal(o, k);
            if (body_->contains(s)) out.push_back(std::move(s));
        }
    }
    cache_ = std::make_shared<const std::vector<SignVec>>(out);
    return out;
}

std::vector<Assignment> Constraint::enumerate_satisfying(const Limits& limits) const {
    std::vector<Assignment> out;
    for (const auto& s : enumerate_satisfying_signs(limits)) out.push_back(to_assignment(s));
    return out;
}

SignVec Constraint::sample_satisfying_signs(Rng& rng, const Limits& limits) const {
    if (auto s = body_->sample(rng)) return *s;
    const auto table = enumerate_satisfying_signs(limits);
    if (table.empty()) throw NoSatisfyingAssignment("constraint has empty satisfying set");
    return table[rng.below(table.size())];
}

Assignment Constraint::sample_satisfying(Rng& rng, const Limits& limits) const {
    return to_assignment(sample_satisfying_signs(rng, limits));
}

Assignment Constraint::to_assignment(const SignVec& signs) const {
    return Assignment(context_, signs);
}

TableBody::TableBody(int arity, std::vector<SignVec> satisfying)
    : satisfying_(std::move(satisfying)) {
    for (const auto& s : satisfying_)
        if (static_cast<int>(s.size()) != arity)
            throw DomainMismatch("table row arity mismatch");
    std::sort(satisfying_.begin(), satisfying_.end(),
              [](const SignVec& a, const SignVec& b) {
                  return signvec_to_ordinal(a) < signvec_to_ordinal(b);
              });
    satisfying_.erase(std::unique(satisfying_.begin(), satisfying_.end()), satisfying_.end());
}

bool TableBody::contains(const SignVec& signs) const {
    return std::binary_search(satisfying_.begin(), satisfying_.end(), signs,
                              [](const SignVec& a, const SignVec& b) {
                                  return signvec_to_ordinal(a) < signvec_to_ordinal(b);
                              });
}

ThreeSatBody::ThreeSatBody(int arity, std::vector<Clause> clauses)
    : arity_(arity), clauses_(std::move(clauses)) {
    for (const auto& clause : clauses_)
        for (const auto& lit : clause)
            if (lit.var < 0 || lit.var >= arity_)
                throw DomainMismatch("literal variable out of context");
}

bool ThreeSatBody::contains(const SignVec& signs) const {
    if (static_cast<int>(signs.size()) != arity_) return false;
    for (const auto& clause : clauses_) {
        bool sat = false;
        for (const auto& lit : clause) {
            bool value_true = signs[lit.var] < 0;
            if (value_true == lit.positive) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

ConjunctionBody::ConjunctionBody(const VarList& context, std::vector<Constraint> parts)
    : parts_(std::move(parts)) {
    std::unordered_map<std::string, int> pos;
    for (int i = 0; i < static_cast<int>(context.size()); ++i) pos[context[i]] = i;
    for (const auto& part : parts_) {
        std::vector<int> map;
        map.reserve(part.context().size());
        for (const auto& v : part.context()) {
            auto it = pos.find(v);
            if (it == pos.end()) throw DomainMismatch("part variable outside union context: " + v);
            map.push_back(it->second);
        }
        maps_.push_back(std::move(map));
    }
}

bool ConjunctionBody::contains(const SignVec& signs) const {
    for (std::size_t p = 0; p < parts_.size(); ++p) {
        SignVec restricted;
        restricted.reserve(maps_[p].size());
        for (int idx : maps_[p]) restricted.push_back(signs[idx]);
        if (!parts_[p].body().contains(restricted)) return false;
    }
    return true;
}

ObliviatedBody::ObliviatedBody(Constraint inner, int degree)
    : inner_(std::move(inner)), degree_(degree) {
    if (degree_ < 1) throw DomainMismatch("obliviation degree must be >= 1");
}

SignVec ObliviatedBody::project(const SignVec& signs) const {
    int k = inner_.arity();
    if (static_cast<int>(signs.size()) != k * degree_)
        throw DomainMismatch("obliviated sign vector arity mismatch");
    SignVec base(k);
    for (int v = 0; v < k; ++v) {
        int product = 1;
        for (int c = 0; c < degree_; ++c) product *= signs[v * degree_ + c];
        base[v] = static_cast<Sign>(product);
    }
    return base;
}

SignVec ObliviatedBody::lift(const SignVec& inner_signs, const SignVec& shares) const {
    int k = inner_.arity();
    int tape = degree_ - 1;
    if (static_cast<int>(inner_signs.size()) != k || static_cast<int>(shares.size()) != k * tape)
        throw DomainMismatch("lift input arity mismatch");
    SignVec out(static_cast<std::size_t>(k) * degree_);
    for (int v = 0; v < k; ++v) {
        auto y = [&](int j) { return shares[v * tape + (j - 1)]; };  // j in [1, degree-1]
        for (int c = 1; c <= degree_; ++c) {
            Sign value;
            if (degree_ == 1) {
                value = inner_signs[v];
            } else if (c == 1) {
                value = static_cast<Sign>(inner_signs[v] * y(1));
            } else if (c < degree_) {
                value = static_cast<Sign>(y(c - 1) * y(c));
            } else {
                value = y(degree_ - 1);
            }
            out[v * degree_ + (c - 1)] = value;
        }
    }
    return out;
}

bool ObliviatedBody::contains(const SignVec& signs) const {
    return inner_.body().contains(project(signs));
}

std::optional<Int> ObliviatedBody::count() const {
    auto inner_count = inner_.body().count();
    if (!inner_count) return std::nullopt;
    Int c = *inner_count;
    return c << static_cast<unsigned>((degree_ - 1) * inner_.arity());
}

std::optional<SignVec> ObliviatedBody::sample(Rng& rng) const {
    SignVec base;
    if (auto s = inner_.body().sample(rng)) {
        base = *s;
    } else if (const auto* t = inner_.body().table()) {
        if (t->empty()) throw NoSatisfyingAssignment("inner constraint is empty");
        base = (*t)[rng.below(t->size())];
    } else {
        return std::nullopt;
    }
    SignVec shares(static_cast<std::size_t>(inner_.arity()) * (degree_ - 1));
    for (auto& s : shares) s = rng.coin() ? Sign(-1) : Sign(+1);
    return lift(base, shares);
}

ProductBody::ProductBody(std::vector<Constraint> factors) : factors_(std::move(factors)) {
    int offset = 0;
    for (const auto& f : factors_) {
        offsets_.push_back(offset);
        offset += f.arity();
    }
    offsets_.push_back(offset);
}

bool ProductBody::contains(const SignVec& signs) const {
    if (static_cast<int>(signs.size()) != offsets_.back()) return false;
    for (std::size_t f = 0; f < factors_.size(); ++f) {
        SignVec part(signs.begin() + offsets_[f], signs.begin() + offsets_[f + 1]);
        if (!factors_[f].body().contains(part)) return false;
    }
    return true;
}

std::optional<Int> ProductBody::count() const {
    Int total = 1;
    for (const auto& f : factors_) {
        auto c = f.body().count();
        if (!c) return std::nullopt;
        total *= *c;
    }
    return total;
}

std::optional<SignVec> ProductBody::sample(Rng& rng) const {
    SignVec out;
    out.reserve(offsets_.back());
    for (const auto& f : factors_) {
        SignVec part;
        if (auto s = f.body().sample(rng)) {
            part = *s;
        } else if (const auto* t = f.body().table()) {
            if (t->empty()) throw NoSatisfyingAssignment("product factor is empty");
            part = (*t)[rng.below(t->size())];
        } else {
            return std::nullopt;
        }
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

Constraint conjunction(const std::vector<Constraint>& parts,
                       const std::optional<VarList>& order_hint, const Limits& limits) {
    if (parts.empty()) throw EmptyResult("conjunction of zero parts");

    VarList context;
    if (order_hint) {
        context = *order_hint;
        // Every part variable must appear in the hint.
        for (const auto& part : parts)
            for (const auto& v : part.context())
                if (std::find(context.begin(), context.end(), v) == context.end())
                    throw DomainMismatch("order hint misses variable " + v);
    } else {
        for (const auto& part : parts)
            for (const auto& v : part.context())
                if (std::find(context.begin(), context.end(), v) == context.end())
                    context.push_back(v);
    }

    auto body = std::make_shared<ConjunctionBody>(context, parts);
    int k = static_cast<int>(context.size());
    if (k <= limits.enumeration_bound_vars) {
        std::vector<SignVec> sat;
        for (std::uint64_t o = 0; o < (1ULL << k); ++o) {
            SignVec s = signvec_from_ordinal(o, k);
            if (body->contains(s)) sat.push_back(std::move(s));
        }
        if (sat.empty()) throw EmptyResult("conjunction has no satisfying assignment");
        return Constraint::table(context, std::move(sat));
    }
    return Constraint(context, body);
}

}  // namespace bcszk
