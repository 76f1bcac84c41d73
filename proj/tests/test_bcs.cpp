#include <catch2/catch_amalgamated.hpp>

#include "bcszk/bcs.hpp"
#include "bcszk/bcs_io.hpp"

using namespace bcszk;

namespace {

Bcs two_overlapping() {
    Bcs b;
    b.variables = {"x", "y", "z"};
    std::vector<SignVec> or_sat;
    for (std::uint64_t o = 0; o < 4; ++o) {
        SignVec s = signvec_from_ordinal(o, 2);
        if (s[0] < 0 || s[1] < 0) or_sat.push_back(s);
    }
    b.constraints.push_back(Constraint::table({"x", "y"}, or_sat));
    b.constraints.push_back(Constraint::unit({"y", "z"}, "z", -1));
    return b;
}

}  // namespace

TEST_CASE("connectivity follows the defining maximum") {
    SECTION("single constraint on 3 variables") {
        Bcs b;
        b.variables = {"x", "y", "z"};
        b.constraints.push_back(Constraint::full({"x", "y", "z"}));
        CHECK(connectivity(b) == 3);
    }
    SECTION("two constraints on the same pair") {
        Bcs b;
        b.variables = {"x", "y"};
        b.constraints.push_back(Constraint::full({"x", "y"}));
        b.constraints.push_back(Constraint::table({"x", "y"}, {{-1, -1}}));
        CHECK(connectivity(b) == 4);
    }
    SECTION("disjoint contexts give the max context size") {
        Bcs b;
        b.variables = {"a", "b", "c", "d", "e"};
        b.constraints.push_back(Constraint::full({"a", "b", "c"}));
        b.constraints.push_back(Constraint::full({"d", "e"}));
        CHECK(connectivity(b) == 3);
    }
}

TEST_CASE("context order validation") {
    Bcs b;
    b.variables = {"x", "y"};
    b.constraints.push_back(Constraint::full({"y", "x"}));
    CHECK_THROWS_AS(b.validate(), FormatError);
}

TEST_CASE("satisfiability search") {
    Bcs b = two_overlapping();
    auto phi = b.find_satisfying();
    REQUIRE(phi.has_value());
    CHECK(b.satisfied_by(*phi));
    CHECK(phi->at("z") == -1);

    Bcs contradiction;
    contradiction.variables = {"x"};
    contradiction.constraints.push_back(Constraint::unit({"x"}, "x", -1));
    contradiction.constraints.push_back(Constraint::unit({"x"}, "x", +1));
    CHECK_FALSE(contradiction.is_satisfiable());
}

TEST_CASE("bcs file round trip is canonical") {
    Bcs b = two_overlapping();
    b.names = {"or_xy", "pin_z"};
    QuestionDistribution pi = QuestionDistribution::uniform(2);
    std::string doc = serialize_bcs(b, pi);
    auto [b2, pi2] = parse_bcs(doc);
    CHECK(serialize_bcs(b2, pi2) == doc);
    CHECK(b2.m() == 2);
    CHECK(b2.variables == b.variables);
}

TEST_CASE("matrix distributions must sum to one") {
    std::string doc = R"({
      "variables": ["x"],
      "contexts": [{"name":"c","vars":["x"],"constraint":{"type":"full"}}],
      "distribution": {"type":"matrix","num_den":[[[255,256]]]}
    })";
    CHECK_THROWS_AS(parse_bcs(doc), DistributionError);
}

TEST_CASE("format errors carry the offending field") {
    CHECK_THROWS_AS(parse_bcs("not json"), FormatError);
    CHECK_THROWS_AS(parse_bcs(R"({"variables": []})"), FormatError);
    std::string bad_context = R"({
      "variables": ["x"],
      "contexts": [{"vars":["q"],"constraint":{"type":"full"}}],
      "distribution": {"type":"uniform"}
    })";
    CHECK_THROWS_AS(parse_bcs(bad_context), FormatError);
}

TEST_CASE("magic square fixture shape") {
    auto [b, pi] = parse_bcs(read_file(FIXTURE_DIR "/magic_square.json"));
    CHECK(b.variables.size() == 9);
    CHECK(b.m() == 6);
    for (int i = 0; i < b.m(); ++i) CHECK(b.context(i).size() == 3);
    CHECK(pi.is_uniform());
    CHECK_FALSE(b.is_satisfiable());
}

TEST_CASE("subdivided distributions match the product formula") {
    std::vector<std::vector<Rat>> base = {{make_rat(1, 2), make_rat(1, 4)},
                                          {make_rat(1, 8), make_rat(1, 8)}};
    auto pi = QuestionDistribution::dense(base);
    auto sub = QuestionDistribution::subdivided(pi, {2, 3});
    CHECK(sub.size() == 5);
    Rat total = 0;
    for (int a = 0; a < 5; ++a)
        for (int b2 = 0; b2 < 5; ++b2) total += sub.weight(a, b2);
    CHECK(total == 1);
    // pi(1,2)=1/4 with m_1=2, m_2=3 splits into six cells of 1/24.
    for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 3; ++l)
            CHECK(sub.weight(sub.pair_to_flat(0, j), sub.pair_to_flat(1, l)) == make_rat(1, 24));
}
