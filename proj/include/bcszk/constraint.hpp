#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bcszk/assignment.hpp"
#include "bcszk/errors.hpp"
#include "bcszk/rational.hpp"
#include "bcszk/rng.hpp"

namespace bcszk {

// Signs of one assignment listed in context order.
using SignVec = std::vector<Sign>;

std::string signs_to_string(const SignVec& signs);
SignVec string_to_signs(const std::string& text);

// Lexicographic enumeration of sign vectors over k positions, with -1 < +1
// and the first position most significant. index 0 is all-(-1).
SignVec signvec_from_ordinal(std::uint64_t ordinal, int k);
std::uint64_t signvec_to_ordinal(const SignVec& signs);

// Satisfying-set semantics behind a Constraint. EXPLICIT bodies can list
// their assignments; STRUCTURAL bodies provide membership plus (when
// available) a uniform sampler and an exact count. Tableau contexts are far
// too large to enumerate, hence the split.
class ConstraintBody {
  public:
    virtual ~ConstraintBody() = default;

    virtual std::string kind() const = 0;
    virtual bool contains(const SignVec& signs) const = 0;

    virtual bool is_explicit() const { return false; }
    // Exact satisfying count, when cheaply known.
    virtual std::optional<Int> count() const { return std::nullopt; }
    // Uniform satisfying sample, when supported without enumeration.
    virtual std::optional<SignVec> sample(Rng& rng) const {
        (void)rng;
        return std::nullopt;
    }
    // Explicit bodies enumerate themselves in canonical order.
    virtual const std::vector<SignVec>* table() const { return nullptr; }
};

class Constraint {
  public:
    Constraint() = default;
    Constraint(VarList context, std::shared_ptr<const ConstraintBody> body);

    static Constraint table(VarList context, std::vector<SignVec> satisfying);
    static Constraint full(VarList context);
    // A single variable pinned to `value`; other context variables free.
    static Constraint unit(VarList context, const std::string& var, Sign value);

    const VarList& context() const { return context_; }
    int arity() const { return static_cast<int>(context_.size()); }
    const ConstraintBody& body() const { return *body_; }
    std::shared_ptr<const ConstraintBody> body_ptr() const { return body_; }

    bool is_explicit() const { return body_->is_explicit(); }

    bool contains_signs(const SignVec& signs) const;
    // Membership of an assignment that binds at least the context; extra
    // variables are ignored. Unbound context variables throw UnknownVariable.
    bool contains(const Assignment& phi) const;
    // Total version for referee paths: malformed input is simply a non-member.
    bool accepts(const Assignment& phi) const;

    Int count_satisfying(const Limits& limits = default_limits()) const;
    std::vector<Assignment> enumerate_satisfying(const Limits& limits = default_limits()) const;
    std::vector<SignVec> enumerate_satisfying_signs(const Limits& limits = default_limits()) const;
    Assignment sample_satisfying(Rng& rng, const Limits& limits = default_limits()) const;
    SignVec sample_satisfying_signs(Rng& rng, const Limits& limits = default_limits()) const;

    Assignment to_assignment(const SignVec& signs) const;

  private:
    VarList context_;
    std::shared_ptr<const ConstraintBody> body_;
    mutable std::shared_ptr<const std::vector<SignVec>> cache_;  // enumeration cache
};

// --- concrete bodies ---------------------------------------------------

class TableBody final : public ConstraintBody {
  public:
    TableBody(int arity, std::vector<SignVec> satisfying);
    std::string kind() const override { return "table"; }
    bool contains(const SignVec& signs) const override;
    bool is_explicit() const override { return true; }
    std::optional<Int> count() const override { return Int(satisfying_.size()); }
    const std::vector<SignVec>* table() const override { return &satisfying_; }

  private:
    std::vector<SignVec> satisfying_;  // canonical (lexicographic) order
};

class FullBody final : public ConstraintBody {
  public:
    explicit FullBody(int arity) : arity_(arity) {}
    std::string kind() const override { return "full"; }
    bool contains(const SignVec& signs) const override {
        return static_cast<int>(signs.size()) == arity_;
    }
    std::optional<Int> count() const override {
        Int c = 1;
        return c << arity_;
    }
    std::optional<SignVec> sample(Rng& rng) const override {
        SignVec s(arity_);
        for (auto& v : s) v = rng.coin() ? Sign(-1) : Sign(+1);
        return s;
    }

  private:
    int arity_;
};

// One 3SAT literal over a context position. `positive` literals are
// satisfied when the variable is true (sign -1).
struct Literal {
    int var;  // index into the context
    bool positive;
};
using Clause = std::vector<Literal>;

class ThreeSatBody final : public ConstraintBody {
  public:
    ThreeSatBody(int arity, std::vector<Clause> clauses);
    std::string kind() const override { return "3sat"; }
    bool contains(const SignVec& signs) const override;
    const std::vector<Clause>& clauses() const { return clauses_; }

  private:
    int arity_;
    std::vector<Clause> clauses_;
};

// Conjunction of parts interpreted over a wider context; used for validating
// subdivisions and for structural conjunctions that are too wide to tabulate.
class ConjunctionBody final : public ConstraintBody {
  public:
    ConjunctionBody(const VarList& context, std::vector<Constraint> parts);
    std::string kind() const override { return "conjunction"; }
    bool contains(const SignVec& signs) const override;
    const std::vector<Constraint>& parts() const { return parts_; }

  private:
    std::vector<Constraint> parts_;
    std::vector<std::vector<int>> maps_;  // context positions of each part's variables
};

// Membership through share products: the context holds `degree` copies of
// each inner variable (consecutively, in inner order), and an assignment
// satisfies iff the per-variable products of its copies satisfy the inner
// constraint. Sampling lifts an inner sample through a uniform share tape,
// which hits every satisfying assignment exactly once.
class ObliviatedBody final : public ConstraintBody {
  public:
    ObliviatedBody(Constraint inner, int degree);
    std::string kind() const override { return "obliviated"; }
    bool contains(const SignVec& signs) const override;
    std::optional<Int> count() const override;
    std::optional<SignVec> sample(Rng& rng) const override;

    const Constraint& inner() const { return inner_; }
    int degree() const { return degree_; }

    SignVec project(const SignVec& signs) const;
    // shares: (degree-1) tape signs per inner variable, flattened in inner
    // variable order.
    SignVec lift(const SignVec& inner_signs, const SignVec& shares) const;

  private:
    Constraint inner_;
    int degree_;
};

// Cartesian product of factor constraints over a positionally concatenated
// context (parallel repetition's answer sets).
class ProductBody final : public ConstraintBody {
  public:
    explicit ProductBody(std::vector<Constraint> factors);
    std::string kind() const override { return "product"; }
    bool contains(const SignVec& signs) const override;
    std::optional<Int> count() const override;
    std::optional<SignVec> sample(Rng& rng) const override;

    const std::vector<Constraint>& factors() const { return factors_; }

  private:
    std::vector<Constraint> factors_;
    std::vector<int> offsets_;
};

// The conjunction of constraints: the context is the union of part contexts
// (ordered by `order_hint` when given, else by first appearance), and an
// assignment satisfies it iff its restriction satisfies every part. When the
// union fits the enumeration bound the result is materialized as a table and
// an empty satisfying set raises EmptyResult; otherwise the result stays
// structural and emptiness goes unchecked.
Constraint conjunction(const std::vector<Constraint>& parts,
                       const std::optional<VarList>& order_hint = std::nullopt,
                       const Limits& limits = default_limits());

}  // namespace bcszk
