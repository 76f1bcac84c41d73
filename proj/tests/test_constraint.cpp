#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "bcszk/constraint.hpp"

using namespace bcszk;

namespace {

Constraint or_constraint(const VarList& ctx) {
    // x or y with -1 = true: everything except all-(+1).
    std::vector<SignVec> sat;
    for (std::uint64_t o = 0; o < 4; ++o) {
        SignVec s = signvec_from_ordinal(o, 2);
        if (s[0] < 0 || s[1] < 0) sat.push_back(s);
    }
    return Constraint::table(ctx, sat);
}

}  // namespace

TEST_CASE("canonical enumeration order") {
    Constraint full = Constraint::full({"x", "y"});
    auto rows = full.enumerate_satisfying_signs();
    REQUIRE(rows.size() == 4);
    CHECK(signs_to_string(rows[0]) == "--");
    CHECK(signs_to_string(rows[1]) == "-+");
    CHECK(signs_to_string(rows[2]) == "+-");
    CHECK(signs_to_string(rows[3]) == "++");
}

TEST_CASE("unit constraint") {
    Constraint c = Constraint::unit({"x"}, "x", -1);
    auto rows = c.enumerate_satisfying();
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].at("x") == -1);
}

TEST_CASE("3sat clause semantics") {
    // x or y or z, all positive literals.
    std::vector<Clause> clauses = {{{0, true}, {1, true}, {2, true}}};
    Constraint c({"x", "y", "z"}, std::make_shared<ThreeSatBody>(3, clauses));
    auto rows = c.enumerate_satisfying_signs();
    CHECK(rows.size() == 7);  // all except all-false (+++)
    CHECK_FALSE(c.contains_signs(string_to_signs("+++")));
    CHECK(c.contains_signs(string_to_signs("-++")));
}

TEST_CASE("conjunction of overlapping clauses") {
    // (x or y) and (!x or y) pins y = true.
    std::vector<Clause> c1 = {{{0, true}, {1, true}}};
    std::vector<Clause> c2 = {{{0, false}, {1, true}}};
    Constraint a({"x", "y"}, std::make_shared<ThreeSatBody>(2, c1));
    Constraint b({"x", "y"}, std::make_shared<ThreeSatBody>(2, c2));
    Constraint both = conjunction({a, b});
    auto rows = both.enumerate_satisfying_signs();
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) CHECK(row[1] == -1);
}

TEST_CASE("conjunction single part and disjoint product") {
    Constraint c = or_constraint({"x", "y"});
    Constraint same = conjunction({c});
    CHECK(same.enumerate_satisfying_signs() == c.enumerate_satisfying_signs());

    Constraint d = Constraint::unit({"z"}, "z", +1);
    Constraint prod = conjunction({c, d});
    CHECK(prod.count_satisfying() == Int(3) * 1);
    CHECK(prod.context() == VarList{"x", "y", "z"});
}

TEST_CASE("conjunction order-insensitivity on membership") {
    Constraint a = or_constraint({"x", "y"});
    Constraint b = Constraint::unit({"y", "z"}, "z", -1);
    Constraint ab = conjunction({a, b});
    Constraint ba = conjunction({b, a});
    std::set<std::string> keys_ab, keys_ba;
    for (const auto& phi : ab.enumerate_satisfying()) keys_ab.insert(phi.sign_string({"x", "y", "z"}));
    for (const auto& phi : ba.enumerate_satisfying()) keys_ba.insert(phi.sign_string({"x", "y", "z"}));
    CHECK(keys_ab == keys_ba);
}

TEST_CASE("empty conjunction raises") {
    Constraint a = Constraint::unit({"x"}, "x", -1);
    Constraint b = Constraint::unit({"x"}, "x", +1);
    CHECK_THROWS_AS(conjunction({a, b}), EmptyResult);
}

TEST_CASE("enumeration output is duplicate-free and member-only") {
    Constraint c = or_constraint({"x", "y"});
    auto rows = c.enumerate_satisfying_signs();
    std::set<std::string> seen;
    for (const auto& row : rows) {
        CHECK(c.contains_signs(row));
        CHECK(seen.insert(signs_to_string(row)).second);
    }
}

TEST_CASE("enumeration bound is enforced") {
    Limits tight;
    tight.enumeration_bound_vars = 3;
    VarList ctx;
    for (int i = 0; i < 5; ++i) ctx.push_back("v" + std::to_string(i));
    Constraint wide(ctx, std::make_shared<ThreeSatBody>(5, std::vector<Clause>{}));
    CHECK_THROWS_AS(wide.enumerate_satisfying_signs(tight), TooLarge);
}

TEST_CASE("obliviated body projects share products") {
    Constraint inner = Constraint::unit({"x"}, "x", -1);
    auto body = std::make_shared<ObliviatedBody>(inner, 3);
    VarList ctx = {"x(1)", "x(2)", "x(3)"};
    Constraint c(ctx, body);
    // Member iff the product of the three signs is -1.
    CHECK(c.contains_signs(string_to_signs("---")));
    CHECK(c.contains_signs(string_to_signs("-++")));
    CHECK_FALSE(c.contains_signs(string_to_signs("--+")));
    CHECK(c.count_satisfying() == 4);

    SECTION("lift and project are mutually inverse") {
        Rng rng(7);
        for (int trial = 0; trial < 50; ++trial) {
            SignVec base = {rng.coin() ? Sign(-1) : Sign(+1)};
            SignVec shares = {rng.coin() ? Sign(-1) : Sign(+1), rng.coin() ? Sign(-1) : Sign(+1)};
            CHECK(body->project(body->lift(base, shares)) == base);
        }
    }
    SECTION("identity share tape keeps the value on the first copy") {
        SignVec lifted = body->lift({-1}, {+1, +1});
        CHECK(signs_to_string(lifted) == "-++");
    }
    SECTION("two-copy lift flips through the tape") {
        auto body2 = std::make_shared<ObliviatedBody>(inner, 2);
        SignVec lifted = body2->lift({-1}, {-1});
        CHECK(signs_to_string(lifted) == "+-");
    }
}
