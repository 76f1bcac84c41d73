#include <catch2/catch_amalgamated.hpp>

#include "bcszk/oracle.hpp"
#include "support/instances.hpp"
#include "support/raw_oracle.hpp"

using namespace bcszk;
using namespace bcszk::testsupport;

TEST_CASE("pipeline shapes and obliviated variable counts") {
    Bcs b;
    b.variables = {"x", "y"};
    b.constraints.push_back(Constraint::table({"x", "y"}, {{-1, -1}, {-1, +1}, {+1, -1}}));
    CompiledGame g = compile_pzk(b, QuestionDistribution::uniform(1));
    CHECK(g.degree() == 5);
    CHECK(g.obliviated().variables.size() == 10);
    CHECK(g.question_count() > 0);

    SECTION("zero-weight distributions are rejected") {
        Bcs two;
        two.variables = {"x"};
        two.constraints.push_back(Constraint::unit({"x"}, "x", -1));
        two.constraints.push_back(Constraint::full({"x"}));
        std::vector<std::vector<Rat>> w = {{make_rat(1, 2), make_rat(1, 2)},
                                           {make_rat(0), make_rat(0)}};
        CHECK_THROWS_AS(compile_pzk(two, QuestionDistribution::dense(w)), NonPositiveDistribution);
    }
}

TEST_CASE("uniform distributions stay uniform after padding") {
    CompiledGame g = pair_game_depth1();
    CHECK(g.original_pi().is_uniform());
    CHECK(g.sub_pi().is_uniform());
    CHECK(g.window_lists()[0].padded == g.window_lists()[1].padded);
    Rat total = 0;
    for (int a = 0; a < g.question_count(); ++a)
        for (int b = 0; b < g.question_count(); ++b) total += g.sub_pi().weight(a, b);
    CHECK(total == 1);
}

TEST_CASE("simulator never loses") {
    for (auto game : {pair_game_depth1(), single_game_depth2(), obliviated_game_degree5()}) {
        Rng rng(0x5151);
        int M = game.question_count();
        for (int trial = 0; trial < 1500; ++trial) {
            int qa = static_cast<int>(rng.below(M));
            int qb = static_cast<int>(rng.below(M));
            PairSampler sampler(game, qa, qb);
            auto draw = sampler.sample(rng);
            REQUIRE(sampler.wins(draw));
        }
    }
}

TEST_CASE("equal questions produce equal answers") {
    CompiledGame g = single_game_depth2();
    Rng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        int q = static_cast<int>(rng.below(g.question_count()));
        auto [phi, psi] = simulate_answers(g, q, q, rng);
        CHECK(phi == psi);
    }
}

TEST_CASE("sampled answers satisfy the subdivided game's referee") {
    CompiledGame g = single_game_depth2();
    Game sub = g.sub_game();
    Rng rng(78);
    for (int trial = 0; trial < 300; ++trial) {
        int qa = static_cast<int>(rng.below(g.question_count()));
        int qb = static_cast<int>(rng.below(g.question_count()));
        auto [phi, psi] = simulate_answers(g, qa, qb, rng);
        Assignment a = Assignment::from_sign_string(sub.bcs().context(qa), phi);
        Assignment c = Assignment::from_sign_string(sub.bcs().context(qb), psi);
        REQUIRE(sub.win(a, c, qa, qb));
    }
}

TEST_CASE("analytic oracle equals raw enumeration on the depth-1 pair game") {
    CompiledGame g = pair_game_depth1();
    int M = g.question_count();
    for (int a = 0; a < M; ++a)
        for (int b = a; b < M; ++b) {
            AnswerPairDistribution analytic = exact_distribution(g, a, b);
            AnswerPairDistribution raw = raw_exact_distribution(g, a, b);
            INFO("pair " << a + 1 << "," << b + 1);
            REQUIRE(analytic.same_distribution(raw));
            CHECK(analytic.total_mass() == 1);
        }
}

TEST_CASE("analytic oracle equals raw enumeration on stratified depth-2 pairs") {
    CompiledGame g = single_game_depth2();
    auto pairs = stratified_pairs(g, 3);
    REQUIRE(pairs.size() >= 10);
    for (auto [a, b] : pairs) {
        AnswerPairDistribution analytic = exact_distribution(g, a, b);
        AnswerPairDistribution raw = raw_exact_distribution(g, a, b);
        INFO("pair " << a + 1 << "," << b + 1);
        REQUIRE(analytic.same_distribution(raw));
    }
}

TEST_CASE("row-4 product windows are uniform over fixed-product tuples") {
    CompiledGame g = single_game_depth2();
    // Find the type-3 question.
    int type3 = -1;
    for (int q = 0; q < g.question_count(); ++q) {
        auto [i, j] = g.question_to_window(q);
        if (g.tableau().window(i, j).type == 3) type3 = q;
    }
    REQUIRE(type3 >= 0);
    auto dist = exact_distribution(g, type3, type3);
    CHECK(dist.support_size() == 120);  // d = 2: tuples with fixed product
    // Sampled tuples multiply to sigma.
    const auto& tc = g.tableau().data().cons[0];
    Rng rng(99);
    PairSampler sampler(g, type3, type3);
    for (int trial = 0; trial < 50; ++trial) {
        auto draw = sampler.sample(rng);
        int product = 0;
        for (int v : draw.left) product = s5_mul(product, v);
        CHECK(product == tc.sigma);
    }
}

TEST_CASE("zk_check accepts the simulator and is verifier independent") {
    CompiledGame g = pair_game_depth1();
    ZkReport report = zk_check(g, 20000, 0xfeed);
    CHECK(report.all_ok);
    CHECK(report.pi_prime_invariant);
    CHECK(report.pairs.size() ==
          static_cast<std::size_t>(g.question_count() * (g.question_count() + 1) / 2));
    std::string json = zk_report_to_json(report);
    CHECK(json.find("tv_distance") != std::string::npos);

    SECTION("seeded reruns are byte identical") {
        ZkReport again = zk_check(g, 20000, 0xfeed);
        CHECK(zk_report_to_json(again) == json);
    }
}

TEST_CASE("honest prover wins every round on every tape") {
    CompiledGame g = obliviated_game_degree5();
    Assignment star({"x"}, {-1});
    HonestProver prover(g, star);
    Game sub = g.sub_game();
    Rng rng(0xabcd);
    for (int round = 0; round < 400; ++round) {
        HonestTapes tapes = draw_honest_tapes(g, rng);
        int qa = static_cast<int>(rng.below(g.question_count()));
        int qb = static_cast<int>(rng.below(g.question_count()));
        Assignment a = Assignment::from_sign_string(sub.bcs().context(qa),
                                                    prover.answer(qa, tapes));
        Assignment c = Assignment::from_sign_string(sub.bcs().context(qb),
                                                    prover.answer(qb, tapes));
        REQUIRE(sub.win(a, c, qa, qb));
    }
    CHECK_THROWS_AS(HonestProver(g, Assignment({"x"}, {+1})), NotSatisfying);
}

TEST_CASE("honest marginals equal the oracle at degree 5") {
    CompiledGame g = obliviated_game_degree5();
    Assignment star({"x"}, {-1});
    auto pairs = stratified_pairs(g, 2);
    int checked = 0;
    for (auto [a, b] : pairs) {
        auto [ia, ja] = g.question_to_window(a);
        auto [ib, jb] = g.question_to_window(b);
        if (g.tableau().window(ia, ja).type == 3 || g.tableau().window(ib, jb).type == 3)
            continue;  // product windows exceed any enumerable budget at depth 9
        AnswerPairDistribution honest = honest_exact_distribution(g, star, a, b);
        AnswerPairDistribution oracle = exact_distribution(g, a, b);
        INFO("pair " << a + 1 << "," << b + 1);
        REQUIRE(honest.same_distribution(oracle));
        ++checked;
    }
    CHECK(checked >= 6);
}

TEST_CASE("compiled game serialization round trips") {
    CompiledGame g = single_game_depth2();
    std::string doc = serialize_compiled(g);
    CompiledGame g2 = parse_compiled(doc);
    CHECK(serialize_compiled(g2) == doc);
    CHECK(g2.question_count() == g.question_count());
    // The rebuilt game samples identically.
    Rng rng1(5), rng2(5);
    auto [a1, b1] = simulate_answers(g, 0, 1, rng1);
    auto [a2, b2] = simulate_answers(g2, 0, 1, rng2);
    CHECK(a1 == a2);
    CHECK(b1 == b2);
}
