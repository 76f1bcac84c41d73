#include <catch2/catch_amalgamated.hpp>

#include "bcszk/assignment.hpp"
#include "bcszk/errors.hpp"
#include "bcszk/rational.hpp"

using namespace bcszk;

TEST_CASE("restriction basics") {
    Assignment phi({"x", "y"}, {+1, -1});

    SECTION("restrict to full domain is the identity") {
        CHECK(phi.restrict_to({"x", "y"}) == phi);
    }
    SECTION("restrict to empty set") {
        CHECK(phi.restrict_to({}).empty());
    }
    SECTION("restrict to a single variable") {
        Assignment r = phi.restrict_to({"y"});
        CHECK(r.size() == 1);
        CHECK(r.at("y") == -1);
    }
    SECTION("restriction to an unbound variable fails") {
        CHECK_THROWS_AS(phi.restrict_to({"z"}), UnknownVariable);
    }
}

TEST_CASE("nested restrictions compose") {
    Assignment phi({"a", "b", "c", "d"}, {-1, +1, -1, +1});
    VarList s = {"a", "b", "c"};
    VarList s2 = {"a", "c"};
    CHECK(phi.restrict_to(s).restrict_to(s2) == phi.restrict_to(s2));
}

TEST_CASE("sign strings follow the context order") {
    Assignment phi({"x", "y"}, {+1, -1});
    CHECK(phi.sign_string({"x", "y"}) == "+-");
    CHECK(phi.sign_string({"y", "x"}) == "-+");
    CHECK(Assignment::from_sign_string({"x", "y"}, "+-") == phi);
    CHECK_THROWS_AS(Assignment::from_sign_string({"x"}, "+-"), FormatError);
    CHECK_THROWS_AS(Assignment::from_sign_string({"x"}, "?"), FormatError);
}

TEST_CASE("duplicate binds must agree") {
    Assignment phi;
    phi.bind("x", -1);
    CHECK_NOTHROW(phi.bind("x", -1));
    CHECK_THROWS_AS(phi.bind("x", +1), DomainMismatch);
}

TEST_CASE("merge of agreeing assignments") {
    Assignment a({"x"}, {-1});
    Assignment b({"y", "x"}, {+1, -1});
    Assignment m = merge(a, b);
    CHECK(m.size() == 2);
    CHECK(m.at("y") == +1);
    Assignment conflicting({"x"}, {+1});
    CHECK_THROWS_AS(merge(a, conflicting), DomainMismatch);
}

TEST_CASE("rational decimal strings") {
    CHECK(rat_to_decimal_string(make_rat(1, 3), 6) == "0.333333");
    CHECK(rat_to_decimal_string(make_rat(-1, 2), 4) == "-0.5000");
    CHECK(rat_to_decimal_string(make_rat(7, 1), 2) == "7.00");
    CHECK(rat_to_string(make_rat(6, 8)) == "3/4");
}
