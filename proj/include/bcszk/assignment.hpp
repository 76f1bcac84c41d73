#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bcszk {

// Sign convention, fixed repo-wide: -1 = true = '-', +1 = false = '+'.
using Sign = std::int8_t;

inline char sign_to_char(Sign s) { return s < 0 ? '-' : '+'; }
Sign char_to_sign(char c);  // throws FormatError on anything but '-'/'+'

using VarList = std::vector<std::string>;

// A boolean assignment: variable names bound to signs. Entries are kept
// sorted by name so equality and restriction are canonical regardless of
// construction order.
class Assignment {
  public:
    Assignment() = default;
    Assignment(const VarList& vars, const std::vector<Sign>& signs);

    static Assignment from_sign_string(const VarList& vars, const std::string& signs);

    void bind(const std::string& var, Sign value);  // duplicate binds must agree

    bool binds(const std::string& var) const;
    Sign at(const std::string& var) const;            // throws UnknownVariable
    std::optional<Sign> get(const std::string& var) const;

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    // Restriction to a variable set: the returned assignment binds exactly
    // `vars`, with this assignment's values. Throws UnknownVariable when some
    // requested variable is unbound.
    Assignment restrict_to(const VarList& vars) const;

    // Signs listed in the order of `vars` (the context order). All of `vars`
    // must be bound.
    std::string sign_string(const VarList& vars) const;
    std::vector<Sign> signs_in_order(const VarList& vars) const;

    // True iff this and `other` agree on every variable of `vars` (all of
    // which must be bound in both).
    bool agrees_on(const Assignment& other, const VarList& vars) const;

    bool binds_exactly(const VarList& vars) const;

    const std::vector<std::pair<std::string, Sign>>& entries() const { return entries_; }

    bool operator==(const Assignment& other) const { return entries_ == other.entries_; }
    bool operator!=(const Assignment& other) const { return entries_ != other.entries_; }
    bool operator<(const Assignment& other) const { return entries_ < other.entries_; }

  private:
    std::vector<std::pair<std::string, Sign>> entries_;  // sorted by name
};

// Merge of disjoint or agreeing assignments. Disagreement on a shared
// variable throws DomainMismatch.
Assignment merge(const Assignment& a, const Assignment& b);

}  // namespace bcszk
