#include "bcszk/bcs.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace bcszk {

std::string Bcs::name(int i) const {
    if (i >= 0 && i < static_cast<int>(names.size()) && !names[i].empty()) return names[i];
    return "c" + std::to_string(i + 1);
}

void Bcs::validate() const {
    std::unordered_map<std::string, int> position;
    for (int i = 0; i < static_cast<int>(variables.size()); ++i) {
        if (!position.emplace(variables[i], i).second)
            throw FormatError("duplicate variable " + variables[i]);
    }
    if (!names.empty() && static_cast<int>(names.size()) != m())
        throw FormatError("context name count does not match constraint count");
    for (int i = 0; i < m(); ++i) {
        const VarList& ctx = context(i);
        if (ctx.empty()) throw FormatError("empty context " + name(i));
        int last = -1;
        for (const auto& v : ctx) {
            auto it = position.find(v);
            if (it == position.end())
                throw FormatError("context " + name(i) + " uses unknown variable " + v);
            if (it->second <= last)
                throw FormatError("context " + name(i) +
                                  " is not ordered compatibly with the variable order at " + v);
            last = it->second;
        }
    }
}

bool Bcs::satisfied_by(const Assignment& phi) const {
    for (const auto& c : constraints)
        if (!c.contains(phi)) return false;
    return true;
}

std::optional<Assignment> Bcs::find_satisfying(const Limits& limits) const {
    int k = static_cast<int>(variables.size());
    if (k > limits.enumeration_bound_vars)
        throw TooLarge("satisfiability search over " + std::to_string(k) + " variables");
    for (std::uint64_t o = 0; o < (1ULL << k); ++o) {
        Assignment phi(variables, signvec_from_ordinal(o, k));
        if (satisfied_by(phi)) return phi;
    }
    return std::nullopt;
}

VarList context_intersection(const VarList& a, const VarList& b) {
    std::unordered_set<std::string> in_b(b.begin(), b.end());
    VarList out;
    for (const auto& v : a)
        if (in_b.count(v)) out.push_back(v);
    return out;
}

long long connectivity(const Bcs& b) {
    std::unordered_map<std::string, long long> occurrences;
    for (const auto& c : b.constraints)
        for (const auto& v : c.context()) ++occurrences[v];
    long long best = 0;
    for (const auto& c : b.constraints) {
        long long total = 0;
        for (const auto& v : c.context()) total += occurrences[v];
        best = std::max(best, total);
    }
    return best;
}

}  // namespace bcszk
