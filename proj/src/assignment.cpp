#include "bcszk/assignment.hpp"

#include <algorithm>

#include "bcszk/errors.hpp"

namespace bcszk {

Sign char_to_sign(char c) {
    if (c == '-') return -1;
    if (c == '+') return +1;
    throw FormatError(std::string("bad sign character '") + c + "'");
}

Assignment::Assignment(const VarList& vars, const std::vector<Sign>& signs) {
    if (vars.size() != signs.size()) throw DomainMismatch("variable/sign count mismatch");
    entries_.reserve(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) entries_.emplace_back(vars[i], signs[i]);
    std::sort(entries_.begin(), entries_.end());
    for (std::size_t i = 1; i < entries_.size(); ++i)
        if (entries_[i].first == entries_[i - 1].first)
            throw DomainMismatch("variable bound twice: " + entries_[i].first);
}

Assignment Assignment::from_sign_string(const VarList& vars, const std::string& signs) {
    if (vars.size() != signs.size())
        throw FormatError("sign string length " + std::to_string(signs.size()) +
                          " does not match context size " + std::to_string(vars.size()));
    std::vector<Sign> values;
    values.reserve(signs.size());
    for (char c : signs) values.push_back(char_to_sign(c));
    return Assignment(vars, values);
}

void Assignment::bind(const std::string& var, Sign value) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(),
                               std::make_pair(var, static_cast<Sign>(-2)));
    if (it != entries_.end() && it->first == var) {
        if (it->second != value) throw DomainMismatch("conflicting bind of " + var);
        return;
    }
    entries_.insert(it, {var, value});
}

bool Assignment::binds(const std::string& var) const { return get(var).has_value(); }

std::optional<Sign> Assignment::get(const std::string& var) const {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), var,
        [](const std::pair<std::string, Sign>& e, const std::string& v) { return e.first < v; });
    if (it != entries_.end() && it->first == var) return it->second;
    return std::nullopt;
}

Sign Assignment::at(const std::string& var) const {
    auto v = get(var);
    if (!v) throw UnknownVariable(var);
    return *v;
}

Assignment Assignment::restrict_to(const VarList& vars) const {
    Assignment out;
    out.entries_.reserve(vars.size());
    for (const auto& v : vars) out.entries_.emplace_back(v, at(v));
    std::sort(out.entries_.begin(), out.entries_.end());
    out.entries_.erase(std::unique(out.entries_.begin(), out.entries_.end()), out.entries_.end());
    return out;
}

std::string Assignment::sign_string(const VarList& vars) const {
    std::string s;
    s.reserve(vars.size());
    for (const auto& v : vars) s.push_back(sign_to_char(at(v)));
    return s;
}

std::vector<Sign> Assignment::signs_in_order(const VarList& vars) const {
    std::vector<Sign> s;
    s.reserve(vars.size());
    for (const auto& v : vars) s.push_back(at(v));
    return s;
}

bool Assignment::agrees_on(const Assignment& other, const VarList& vars) const {
    for (const auto& v : vars)
        if (at(v) != other.at(v)) return false;
    return true;
}

bool Assignment::binds_exactly(const VarList& vars) const {
    if (vars.size() != entries_.size()) return false;
    for (const auto& v : vars)
        if (!binds(v)) return false;
    return true;
}

Assignment merge(const Assignment& a, const Assignment& b) {
    Assignment out = a;
    for (const auto& [var, value] : b.entries()) out.bind(var, value);
    return out;
}

}  // namespace bcszk
