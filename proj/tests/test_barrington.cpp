#include <catch2/catch_amalgamated.hpp>

#include "bcszk/pbp.hpp"
#include "bcszk/s5_codec.hpp"
#include "bcszk/transforms.hpp"

using namespace bcszk;

TEST_CASE("perm5 group laws") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        Perm5 a = s5_element(static_cast<int>(rng.below(kS5Order)));
        Perm5 b = s5_element(static_cast<int>(rng.below(kS5Order)));
        Perm5 c = s5_element(static_cast<int>(rng.below(kS5Order)));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * Perm5::identity() == a);
        CHECK(Perm5::identity() * a == a);
        CHECK(a * a.inverse() == Perm5::identity());
        CHECK(a.inverse() * a == Perm5::identity());
    }
}

TEST_CASE("s5 enumeration is lexicographic with identity first") {
    CHECK(s5_element(0) == Perm5::identity());
    CHECK(s5_index(Perm5::identity()) == 0);
    for (int i = 0; i + 1 < kS5Order; ++i)
        CHECK(s5_element(i).one_line() < s5_element(i + 1).one_line());
    for (int i = 0; i < kS5Order; ++i) CHECK(s5_index(s5_element(i)) == i);
}

TEST_CASE("index tables agree with direct arithmetic") {
    Rng rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        int a = static_cast<int>(rng.below(kS5Order));
        int b = static_cast<int>(rng.below(kS5Order));
        CHECK(s5_element(s5_mul(a, b)) == s5_element(a) * s5_element(b));
        CHECK(s5_element(s5_inv(a)) == s5_element(a).inverse());
    }
}

TEST_CASE("7-bit codec round trip and invalid codes") {
    for (int i = 0; i < kS5Order; ++i) {
        Perm5 g = s5_element(i);
        CHECK(s5_decode(s5_encode(g)) == g);
    }
    CHECK(s5_encode(Perm5::identity()) == "+++++++");
    for (int bad = kS5Order; bad < 128; ++bad) {
        SignVec bits(kS5CodeBits);
        for (int b = 0; b < kS5CodeBits; ++b)
            bits[b] = ((bad >> (kS5CodeBits - 1 - b)) & 1) ? Sign(-1) : Sign(+1);
        CHECK_FALSE(s5_bits_to_index(bits).has_value());
        CHECK_THROWS_AS(s5_decode(signs_to_string(bits)), InvalidCode);
    }
}

TEST_CASE("pinned commutator base pair") {
    const auto& pinned = pinned_cycles();
    CHECK(pinned.sigma_default.is_five_cycle());
    CHECK(pinned.alpha0.is_five_cycle());
    CHECK(pinned.beta0.is_five_cycle());
    CHECK(commutator(pinned.alpha0, pinned.beta0) == pinned.rho0);
    CHECK(pinned.rho0.is_five_cycle());
}

TEST_CASE("eval_pbp basics") {
    Perm5 sigma = pinned_cycles().sigma_default;
    SECTION("empty program evaluates to the identity") {
        Pbp p;
        p.sigma = sigma;
        CHECK(eval_pbp(p, Assignment{}) == Perm5::identity());
    }
    SECTION("single instruction picks by sign") {
        Pbp p;
        p.sigma = sigma;
        p.instructions.push_back({"x", sigma, Perm5::identity()});
        CHECK(eval_pbp(p, Assignment({"x"}, {+1})) == sigma);
        CHECK(eval_pbp(p, Assignment({"x"}, {-1})) == Perm5::identity());
        CHECK_THROWS_AS(eval_pbp(p, Assignment({"y"}, {-1})), UnboundVariable);
    }
    SECTION("evaluation matches an independent left fold") {
        Rng rng(9);
        VarList vars = {"a", "b", "c"};
        for (int trial = 0; trial < 50; ++trial) {
            Pbp p;
            p.sigma = sigma;
            for (int k = 0; k < 4; ++k)
                p.instructions.push_back({vars[rng.below(3)],
                                          s5_element(static_cast<int>(rng.below(kS5Order))),
                                          s5_element(static_cast<int>(rng.below(kS5Order)))});
            SignVec signs = {rng.coin() ? Sign(-1) : Sign(+1), rng.coin() ? Sign(-1) : Sign(+1),
                             rng.coin() ? Sign(-1) : Sign(+1)};
            Assignment phi(vars, signs);
            Perm5 expect = Perm5::identity();
            for (const auto& inst : p.instructions)
                expect = expect * (phi.at(inst.var) < 0 ? inst.on_minus : inst.on_plus);
            CHECK(eval_pbp(p, phi) == expect);
        }
    }
}

TEST_CASE("hand program recognizing a pinned variable") {
    Perm5 sigma = pinned_cycles().sigma_default;
    Pbp p;
    p.sigma = sigma;
    p.instructions.push_back({"x", sigma, Perm5::identity()});
    // Recognizes x = +1 over the single-variable context.
    CHECK(recognizes(p, Constraint::unit({"x"}, "x", +1)));
    CHECK_FALSE(recognizes(p, Constraint::unit({"x"}, "x", -1)));
}

TEST_CASE("circuit construction and depth") {
    Constraint pin = Constraint::unit({"x"}, "x", -1);
    Circuit c = circuit_from_constraint(pin);
    CHECK(c.depth() <= 1);
    CHECK(c.eval(Assignment({"x"}, {-1})));
    CHECK_FALSE(c.eval(Assignment({"x"}, {+1})));

    Circuit full = circuit_from_constraint(Constraint::full({"x", "y"}));
    CHECK(full.depth() == 0);
    CHECK(full.eval(Assignment({"x", "y"}, {+1, +1})));
}

TEST_CASE("3sat clause circuit is a shallow or tree") {
    std::vector<Clause> clauses = {{{0, true}, {1, true}, {2, true}}};
    Constraint c({"x", "y", "z"}, std::make_shared<ThreeSatBody>(3, clauses));
    Circuit circuit = circuit_from_constraint(c);
    for (std::uint64_t o = 0; o < 8; ++o) {
        SignVec signs = signvec_from_ordinal(o, 3);
        CHECK(circuit.eval(Assignment({"x", "y", "z"}, signs)) == c.contains_signs(signs));
    }
}

TEST_CASE("compile recognizes input and constant gates") {
    Circuit c;
    c.set_output(c.add_input("x"));
    Pbp p = compile(c);
    CHECK(p.depth() == 1);
    CHECK(recognizes(p, Constraint::unit({"x"}, "x", -1)));

    Circuit t;
    t.add_input("x");
    t.set_output(t.add_const(true));
    CHECK(recognizes(compile(t), Constraint::full({"x"})));
}

TEST_CASE("compile respects the 4^depth bound and recognizes and/or") {
    Circuit c;
    int x = c.add_input("x");
    int y = c.add_input("y");
    c.set_output(c.add_and(x, y));
    Pbp p = compile(c);
    CHECK(p.depth() <= 4);
    CHECK(recognizes(p, Constraint::table({"x", "y"}, {{-1, -1}})));

    Circuit d;
    x = d.add_input("x");
    y = d.add_input("y");
    d.set_output(d.add_or(x, y));
    Pbp q = compile(d);
    CHECK(q.depth() <= 4);
    CHECK(recognizes(q, Constraint::table({"x", "y"}, {{-1, -1}, {-1, +1}, {+1, -1}})));
}

TEST_CASE("every nonempty constraint on up to 3 variables compiles correctly") {
    // A scaled-down version of the exhaustive acceptance criterion.
    for (int k = 1; k <= 2; ++k) {
        VarList ctx;
        for (int v = 0; v < k; ++v) ctx.push_back("v" + std::to_string(v));
        int cells = 1 << k;
        for (std::uint64_t mask = 1; mask < (1ULL << cells); ++mask) {
            std::vector<SignVec> rows;
            for (int cell = 0; cell < cells; ++cell)
                if ((mask >> cell) & 1ULL) rows.push_back(signvec_from_ordinal(cell, k));
            Constraint c = Constraint::table(ctx, rows);
            Circuit circuit = circuit_from_constraint(c);
            Pbp p = compile_constraint(c);
            CHECK(p.depth() <= (1LL << (2 * circuit.depth())));
            REQUIRE(recognizes(p, c));
        }
    }
}

TEST_CASE("swapping sigma for a different 5-cycle breaks recognition") {
    Constraint c = Constraint::unit({"x"}, "x", -1);
    Pbp p = compile(circuit_from_constraint(c));
    Pbp q = p;
    q.sigma = conjugate(p.sigma, Perm5::from_cycle({1, 2}));
    REQUIRE(q.sigma != p.sigma);
    CHECK_FALSE(recognizes(q, c));
}

TEST_CASE("concatenation evaluates to the composition of parts") {
    Rng rng(21);
    VarList vars = {"a", "b"};
    for (int trial = 0; trial < 40; ++trial) {
        Pbp p, q;
        p.sigma = q.sigma = pinned_cycles().sigma_default;
        for (int k = 0; k < 3; ++k) {
            p.instructions.push_back({vars[rng.below(2)],
                                      s5_element(static_cast<int>(rng.below(kS5Order))),
                                      s5_element(static_cast<int>(rng.below(kS5Order)))});
            q.instructions.push_back({vars[rng.below(2)],
                                      s5_element(static_cast<int>(rng.below(kS5Order))),
                                      s5_element(static_cast<int>(rng.below(kS5Order)))});
        }
        Pbp joined = p;
        joined.instructions.insert(joined.instructions.end(), q.instructions.begin(),
                                   q.instructions.end());
        Assignment phi(vars, {rng.coin() ? Sign(-1) : Sign(+1), rng.coin() ? Sign(-1) : Sign(+1)});
        CHECK(eval_pbp(joined, phi) == eval_pbp(p, phi) * eval_pbp(q, phi));
    }
}

TEST_CASE("share-parity lift recognizes the obliviated constraint") {
    Constraint c = Constraint::unit({"x"}, "x", -1);
    Pbp p = compile(circuit_from_constraint(c));
    for (int degree : {1, 2, 3, 5}) {
        Pbp lifted = lift_pbp(p, degree, share_variable_name);
        CHECK(lifted.depth() <= (2 * degree - 1) * p.depth());
        // Obliviated context and membership.
        VarList shares;
        for (int k = 1; k <= degree; ++k) shares.push_back(share_variable_name("x", k));
        Constraint obl(shares, std::make_shared<ObliviatedBody>(c, degree));
        REQUIRE(recognizes(lifted, obl));
    }
}

TEST_CASE("lift of a two-variable program") {
    // x true, second instruction reads y without using it.
    Perm5 sigma = pinned_cycles().sigma_default;
    Perm5 rho = Perm5::from_cycle({1, 3, 2});
    Pbp p;
    p.sigma = sigma;
    p.instructions.push_back({"x", rho.inverse(), sigma * rho.inverse()});
    p.instructions.push_back({"y", rho, rho});
    Constraint c = Constraint::unit({"x", "y"}, "x", -1);
    REQUIRE(recognizes(p, c));
    Pbp lifted = lift_pbp(p, 2, share_variable_name);
    VarList shares;
    for (const auto& v : c.context())
        for (int k = 1; k <= 2; ++k) shares.push_back(share_variable_name(v, k));
    Constraint obl(shares, std::make_shared<ObliviatedBody>(c, 2));
    REQUIRE(recognizes(lifted, obl));
}

TEST_CASE("pbp json round trip") {
    Constraint c = Constraint::unit({"x"}, "x", -1);
    Pbp p = compile(circuit_from_constraint(c));
    Pbp q = pbp_from_json_string(pbp_to_json_string(p));
    CHECK(pbp_to_json_string(q) == pbp_to_json_string(p));
    CHECK(recognizes(q, c));
}
