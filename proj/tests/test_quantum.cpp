#include <catch2/catch_amalgamated.hpp>

#include "bcszk/bcs_io.hpp"
#include "bcszk/classical_value.hpp"
#include "bcszk/quantum.hpp"
#include "bcszk/transforms.hpp"

using namespace bcszk;

namespace {

Game magic_square() {
    auto [b, pi] = parse_bcs(read_file(FIXTURE_DIR "/magic_square.json"));
    return build_game(std::move(b), std::move(pi));
}

Game toy_game() {
    Bcs b;
    b.variables = {"x", "y", "z"};
    b.constraints.push_back(Constraint::table({"x", "y"}, {{-1, -1}, {-1, +1}, {+1, -1}}));
    b.constraints.push_back(Constraint::unit({"y", "z"}, "z", -1));
    return build_game(std::move(b), QuestionDistribution::uniform(2));
}

}  // namespace

TEST_CASE("deterministic strategies embed as one-dimensional quantum strategies") {
    Game g = toy_game();
    Assignment star({"x", "y", "z"}, {-1, -1, -1});
    auto det = strategy_from_assignment(g.bcs(), star);
    auto q = strategy_from_deterministic(g, det);
    auto pq = correlation_from_quantum(g, q);
    auto pd = correlation_from_deterministic(g, det, det);

    // The float tables carry exactly 0/1 entries and agree with the exact
    // deterministic path as rationals.
    for (const auto& [pair, table] : pq.tables) {
        for (const auto& [key, value] : table) {
            CHECK((value == 0.0 || value == 1.0));
            Rat expected = pd.tables.at(pair).count(key) ? pd.tables.at(pair).at(key) : Rat(0);
            CHECK(Rat(static_cast<long>(value)) == expected);
        }
    }
    CHECK(winning_probability(g, pq) == 1.0);
    CHECK(defect_mu_pi(g, q) == 0.0);
}

TEST_CASE("invalid measurements are rejected") {
    Game g = toy_game();
    Assignment star({"x", "y", "z"}, {-1, -1, -1});
    auto q = strategy_from_deterministic(g, strategy_from_assignment(g.bcs(), star));
    SECTION("sum != identity") {
        q.measurements[0][0](0, 0) = 0.5;
        CHECK_THROWS_AS(correlation_from_quantum(g, q), InvalidMeasurement);
    }
    SECTION("not idempotent") {
        q.measurements[0][0](0, 0) = 2.0;
        q.measurements[0][1](0, 0) = -1.0;
        CHECK_THROWS_AS(correlation_from_quantum(g, q), InvalidMeasurement);
    }
}

TEST_CASE("magic square Pauli strategy is perfect") {
    Game g = magic_square();
    auto s = magic_square_strategy(g);
    CHECK(s.dim == 4);
    double omega = winning_probability(g, correlation_from_quantum(g, s));
    CHECK(std::abs(omega - 1.0) < 1e-9);
    CHECK(defect_mu_pi(g, s) < 1e-9);
    // While the classical value stays strictly below one.
    CHECK(classical_value(g) == make_rat(17, 18));
}

TEST_CASE("magic square observables have zero free defects except none") {
    Game g = magic_square();
    auto o = magic_square_observables();
    CHECK(defect_free(g, o, FreeWeight::Inter) < 1e-9);
    CHECK(defect_free(g, o, FreeWeight::Sat) < 1e-9);
    CHECK(defect_free(g, o, FreeWeight::Comm) < 1e-9);
    SubdivisionPlan plan = natural_subdivision_plan(g.bcs());
    CHECK(defect_free(g, o, FreeWeight::Clause, &plan.clauses) < 1e-9);
    CHECK_THROWS_AS(defect_free(g, o, FreeWeight::Clause), MissingSubdivision);
}

TEST_CASE("defect plus winning probability is one") {
    Game g = toy_game();
    Rng rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        int dim = 1 + static_cast<int>(rng.below(4));
        auto s = random_projective_strategy(g, dim, rng);
        double omega = winning_probability(g, correlation_from_quantum(g, s));
        double defect = defect_mu_pi(g, s);
        CHECK(std::abs(defect + omega - 1.0) < 1e-9);
    }
}

TEST_CASE("correlation rows sum to one before renormalization") {
    Game g = toy_game();
    Rng rng(43);
    auto s = random_projective_strategy(g, 3, rng);
    // correlation_from_quantum internally asserts each pair's mass is within
    // 1e-6 of 1 and renormalizes; success of the call is the check.
    auto p = correlation_from_quantum(g, s);
    for (const auto& [pair, table] : p.tables) {
        double total = 0;
        for (const auto& [key, value] : table) total += value;
        CHECK(std::abs(total - 1.0) < 1e-9);
    }
}

TEST_CASE("commuting diagonal families have classical defects") {
    Game g = toy_game();
    const Bcs& b = g.bcs();
    Rng rng(47);
    int dim = 4;
    for (int trial = 0; trial < 10; ++trial) {
        // Random diagonal +-1 observables: each basis vector carries a
        // classical assignment per context.
        ObservableFamily o;
        o.dim = dim;
        o.trace = TraceSpec::normalized(dim);
        std::vector<std::map<std::string, SignVec>> diag(b.m());
        for (int i = 0; i < b.m(); ++i) {
            std::map<std::string, Mat> obs;
            for (const auto& v : b.context(i)) {
                SignVec column(dim);
                Mat x = Mat::Zero(dim, dim);
                for (int k = 0; k < dim; ++k) {
                    column[k] = rng.coin() ? Sign(-1) : Sign(+1);
                    x(k, k) = static_cast<double>(column[k]);
                }
                obs[v] = x;
                diag[i][v] = column;
            }
            o.observables.push_back(std::move(obs));
        }

        CHECK(defect_free(g, o, FreeWeight::Comm) < 1e-12);

        // Independent scalar recomputation: average the per-basis-vector
        // classical defects with exact rationals, then compare.
        Rat inter_exact = 0, sat_exact = 0;
        for (int k = 0; k < dim; ++k) {
            for (int i = 0; i < b.m(); ++i)
                for (int j = 0; j < b.m(); ++j) {
                    if (i == j) continue;
                    for (const auto& v : g.intersection(i, j))
                        if (diag[i].at(v)[k] != diag[j].at(v)[k])
                            inter_exact += g.pi().weight(i, j) * 4;  // |a-b|^2 = 4
                }
            for (int i = 0; i < b.m(); ++i) {
                // The k-th diagonal entry induces one assignment; its Phi
                // projection has trace-norm-squared 1/dim per non-member.
                SignVec signs;
                for (const auto& v : b.context(i)) signs.push_back(diag[i].at(v)[k]);
                if (!b.constraint(i).contains_signs(signs)) sat_exact += g.pi().weight(i, i);
            }
        }
        inter_exact /= dim;
        sat_exact /= dim;
        CHECK(std::abs(defect_free(g, o, FreeWeight::Inter) - rat_to_double(inter_exact)) <
              1e-9);
        CHECK(std::abs(defect_free(g, o, FreeWeight::Sat) - rat_to_double(sat_exact)) < 1e-9);
    }
}

TEST_CASE("observables from a satisfying assignment have zero sat and inter defects") {
    Game g = toy_game();
    auto star = g.bcs().find_satisfying();
    REQUIRE(star.has_value());
    ObservableFamily o;
    o.dim = 2;
    o.trace = TraceSpec::normalized(2);
    for (int i = 0; i < g.question_count(); ++i) {
        std::map<std::string, Mat> obs;
        for (const auto& v : g.bcs().context(i))
            obs[v] = static_cast<double>(star->at(v)) * Mat::Identity(2, 2);
        o.observables.push_back(std::move(obs));
    }
    CHECK(defect_free(g, o, FreeWeight::Sat) < 1e-12);
    CHECK(defect_free(g, o, FreeWeight::Inter) < 1e-12);
    CHECK(defect_free(g, o, FreeWeight::Comm) < 1e-12);
}

TEST_CASE("block traces stay consistent") {
    Game g = toy_game();
    Assignment star({"x", "y", "z"}, {-1, -1, -1});
    Assignment other({"x", "y", "z"}, {+1, -1, -1});
    auto s1 = strategy_from_deterministic(g, strategy_from_assignment(g.bcs(), star));
    auto s2 = strategy_from_deterministic(g, strategy_from_assignment(g.bcs(), other));
    // Two one-dimensional strategies glued into a block-diagonal d=2 strategy
    // with weights (3/4, 1/4).
    QuantumSyncStrategy s;
    s.dim = 2;
    s.trace = TraceSpec{{1, 1}, {0.75, 0.25}};
    for (int i = 0; i < g.question_count(); ++i) {
        std::vector<Mat> measurement;
        for (std::size_t a = 0; a < s1.measurements[i].size(); ++a) {
            Mat m = Mat::Zero(2, 2);
            m(0, 0) = s1.measurements[i][a](0, 0);
            m(1, 1) = s2.measurements[i][a](0, 0);
            measurement.push_back(m);
        }
        s.measurements.push_back(std::move(measurement));
    }
    double omega = winning_probability(g, correlation_from_quantum(g, s));
    // Both deterministic strategies are perfect, so the mixture is too.
    CHECK(std::abs(omega - 1.0) < 1e-9);
    CHECK(std::abs(defect_mu_pi(g, s)) < 1e-9);
}

TEST_CASE("strategy fixture round trip") {
    Game g = magic_square();
    auto s = magic_square_strategy(g);
    std::string text = strategy_to_json_string(s);
    auto s2 = strategy_from_json_string(text);
    CHECK(strategy_to_json_string(s2) == text);
    double omega = winning_probability(g, correlation_from_quantum(g, s2));
    CHECK(std::abs(omega - 1.0) < 1e-9);
}
