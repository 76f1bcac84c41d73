#pragma once

#include <memory>

#include "bcszk/bcs.hpp"
#include "bcszk/pbp.hpp"
#include "bcszk/s5_codec.hpp"

namespace bcszk {

// One atomic variable of a tableau context: a base boolean variable, a
// tableau entry T_i(p,q) (permutation-valued, 7 booleans), or a randomizer
// r_i(p,k) (likewise). Rows p run 1..4 for entries and 1..3 for randomizers;
// columns q run 1..d_i, randomizer columns 1..d_i-1. The boundary
// randomizers r_i(p,0) = r_i(p,d_i) = e are virtual constants and never
// appear as atoms.
struct TabAtom {
    enum class Kind { Base, Entry, Randomizer };
    Kind kind;
    std::string base;  // Base only
    int p = 0, q = 0;

    int bit_width() const { return kind == Kind::Base ? 1 : kS5CodeBits; }
    std::string name(int constraint_1based) const;  // boolean names get "#b" suffixes appended
    bool operator==(const TabAtom&) const = default;
};

// A clause of the subdivided tableau: its type (1..4) and the atoms of its
// window in context order. The boolean variable list is derived on demand
// (trivial clauses are far too numerous to carry materialized name lists).
struct ClauseWindow {
    int type;
    int p = 0, q = 0;              // type 1: q; type 2: (p,q)
    std::vector<int> atom_indices; // into the constraint's atom list, ascending
};

// Per-constraint tableau data. Atom order within W_i: base variables (in
// context order), then entries by (p,q), then randomizers by (p,k).
struct TabConstraintData {
    Constraint base;                      // (U_i, E_i)
    Pbp pbp;                              // recognizes E_i
    int d = 0;                            // program depth
    std::vector<int> instr_var_pos;       // context position read by instruction q
    std::vector<std::array<int, 2>> instr_perm;  // S5 indices: [on_plus, on_minus]
    int sigma = 0;                        // S5 index of the program's cycle
    std::vector<TabAtom> atoms;
    VarList bool_vars;                    // W_i flattened
    std::vector<int> atom_bit_offset;     // first bit of each atom in bool_vars
    // Clause list: the typed windows (rows, conjugations, product), then one
    // trivial window per uncovered atom pair, stored as the pair list.
    std::vector<ClauseWindow> typed_windows;
    std::vector<std::pair<int, int>> trivial_pairs;

    int window_count() const {
        return static_cast<int>(typed_windows.size() + trivial_pairs.size());
    }
    ClauseWindow window(int j) const;

    int base_arity() const { return base.arity(); }
    int entry_atom(int p, int q) const;       // 1-based (p,q)
    int randomizer_atom(int p, int k) const;  // 1-based (p,k)
    int randomizer_count() const { return 3 * (d - 1); }
};

struct TabData {
    Bcs base;
    std::vector<TabConstraintData> cons;
    VarList all_vars;  // Y: base variables then per-constraint tableau booleans
};

// Tab(B): per constraint, four rows of entries tied to the program by the
// row-1 clauses, conjugation clauses between consecutive rows, the row-4
// product clause, and trivial clauses covering the remaining variable pairs.
class TableauSystem {
  public:
    // pbps[i] must recognize constraint i. Recognition is checked
    // exhaustively when the context fits the enumeration bound, otherwise by
    // deterministic sampling.
    TableauSystem(Bcs base, std::vector<Pbp> pbps, const Limits& limits = default_limits());

    const TabData& data() const { return *data_; }
    std::shared_ptr<const TabData> data_ptr() const { return data_; }
    const Bcs& base() const { return data_->base; }
    int m() const { return static_cast<int>(data_->cons.size()); }
    int depth(int i) const { return data_->cons.at(i).d; }
    int window_count(int i) const { return data_->cons.at(i).window_count(); }
    ClauseWindow window(int i, int j) const { return data_->cons.at(i).window(j); }
    VarList window_bool_vars(int i, const ClauseWindow& w) const;

    // Tab(B) as a BCS: contexts W_i with structural membership.
    Bcs tab_bcs() const;
    // Tab_sub(B): one context per clause window, constraint-major order.
    Bcs tab_sub_bcs() const;
    Constraint window_constraint(int i, int j) const;

    // Row fill used by completion and by the answer sampler: row 1 from the
    // program instructions, rows 2..4 by conjugation. Does NOT require the
    // base assignment to satisfy E_i. Returns S5 indices, slot (p,q) at
    // (p-1)*d + (q-1).
    std::vector<int> fill_rows(int i, const SignVec& base_signs,
                               const std::vector<int>& randomizers) const;

    // The unique element of D_i extending phi (in C_i) and the randomizer
    // assignment. Throws NotSatisfying when phi is not satisfying.
    Assignment tableau_complete(int i, const Assignment& phi,
                                const std::vector<Perm5>& randomizers) const;

    // Referee-path membership: false on unbound variables or invalid codes,
    // never raises. Checks the clauses directly (not via recompletion).
    bool check_tableau_membership(int i, const Assignment& psi) const;

    // Window accessors used by the simulator and the oracle: values are
    // signs for base atoms and S5 indices for permutation atoms.
    std::string window_answer_string(int i, const ClauseWindow& w,
                                     const SignVec& base_signs,
                                     const std::vector<int>& rows,
                                     const std::vector<int>& randomizers) const;
    bool window_predicate(int i, const ClauseWindow& w,
                          const std::vector<int>& atom_values) const;
    // Atom values (aligned with w.atom_indices) to the window's sign string
    // and back; extraction fails (nullopt) on invalid codes.
    std::string window_string(int i, const ClauseWindow& w,
                              const std::vector<int>& values) const;
    std::optional<std::vector<int>> window_values(int i, const ClauseWindow& w,
                                                  const SignVec& signs) const;

  private:
    std::shared_ptr<const TabData> data_;
};

// Exhaustive completion check for one constraint: every pair of a
// satisfying base assignment and a randomizer tuple completes to a tableau
// that passes the clause checker and restricts back to its inputs, and (on a
// deterministic subsample) any single-entry perturbation is rejected, which
// is how uniqueness shows up operationally. The parallel path splits the
// randomizer space across OpenMP threads; both paths count identically.
struct CompletionSweep {
    std::uint64_t cases = 0;
    std::uint64_t checker_failures = 0;
    std::uint64_t restriction_failures = 0;
    std::uint64_t perturbation_escapes = 0;
    std::uint64_t perturbations = 0;

    bool ok() const {
        return checker_failures == 0 && restriction_failures == 0 &&
               perturbation_escapes == 0;
    }
};
CompletionSweep completion_sweep(const TableauSystem& sys, int i, bool parallel,
                                 std::uint64_t perturb_stride = 997,
                                 const Limits& limits = default_limits());

// Structural membership for a whole tableau context W_i.
class TabContextBody final : public ConstraintBody {
  public:
    TabContextBody(std::shared_ptr<const TabData> data, int i);
    std::string kind() const override { return "tableau"; }
    bool contains(const SignVec& signs) const override;
    std::optional<Int> count() const override;
    std::optional<SignVec> sample(Rng& rng) const override;

    const TabData& data() const { return *data_; }
    int constraint_index() const { return i_; }

  private:
    std::shared_ptr<const TabData> data_;
    int i_;
};

// Membership for a single clause window of Tab_sub.
class TabClauseBody final : public ConstraintBody {
  public:
    TabClauseBody(std::shared_ptr<const TabData> data, int i, int j);
    std::string kind() const override { return "tab-clause"; }
    bool contains(const SignVec& signs) const override;
    std::optional<Int> count() const override;
    std::optional<SignVec> sample(Rng& rng) const override;

    const TabData& data() const { return *data_; }
    int constraint_index() const { return i_; }
    int window_index() const { return j_; }

  private:
    std::shared_ptr<const TabData> data_;
    int i_, j_;
    ClauseWindow window_;
};

}  // namespace bcszk
