#include "doctest.h"

#include "trustgame/errors.hpp"
#include "trustgame/game.hpp"
#include "trustgame/random.hpp"

#include <cmath>

using namespace trustgame;

TEST_CASE("action grid fractions come from indices") {
    const ActionGrid grid;
    REQUIRE(grid.count() == 11);
    const double expected[] = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    for (int i = 0; i < 11; ++i) CHECK(grid.fraction(i) == expected[i]);
    for (int i = 1; i < 11; ++i) CHECK(grid.fraction(i) > grid.fraction(i - 1));
    CHECK(grid.index_of(0.7) == 7);
    CHECK_THROWS_AS(grid.index_of(0.75), std::domain_error);
    CHECK_THROWS_AS(grid.index_of(1.5), std::domain_error);
    CHECK_THROWS_AS(ActionGrid(1), ValidationError);

    const ActionGrid two(2);
    CHECK(two.fraction(0) == 0.0);
    CHECK(two.fraction(1) == 1.0);
}

TEST_CASE("eval_policy") {
    SUBCASE("constant power law") {
        const auto v = eval_policy(PowerLawPolicy{0.5, 0, 0.5, 0}, 0.3);
        CHECK(v.alpha == 0.5);
        CHECK(v.p == 0.5);
    }
    SUBCASE("linear at zero") {
        const auto v = eval_policy(PowerLawPolicy{1.0, 1, 0.5, 1}, 0.0);
        CHECK(v.alpha == 0.0);
        CHECK(v.p == 0.0);
    }
    SUBCASE("quadratic at one half") {
        const auto v = eval_policy(PowerLawPolicy{1.0, 2, 0.5, 2}, 0.5);
        CHECK(v.alpha == 0.25);
        CHECK(v.p == 0.125);
    }
    SUBCASE("zero to the zero is one") {
        const auto v = eval_policy(PowerLawPolicy{0.7, 0, 0.3, 0}, 0.0);
        CHECK(v.alpha == 0.7);
        CHECK(v.p == 0.3);
    }
    SUBCASE("tabulated lookup on and off the grid") {
        TabulatedPolicy tab;
        for (int i = 0; i < 11; ++i) tab.table.push_back({i / 10.0, 1.0 - i / 10.0});
        const auto v = eval_policy(tab, 0.3);
        CHECK(v.alpha == doctest::Approx(0.3));
        CHECK(v.p == doctest::Approx(0.7));
        CHECK_THROWS_AS(eval_policy(tab, 0.35), std::domain_error);
    }
}

TEST_CASE("policy validation names the field") {
    auto field_of = [](const TrusteePolicy& p) {
        try {
            validate(p);
        } catch (const ValidationError& e) {
            return e.field();
        }
        return std::string();
    };
    CHECK(field_of(PowerLawPolicy{1.5, 0, 0.5, 0}) == "alpha0");
    CHECK(field_of(PowerLawPolicy{1.0, 0, -0.1, 0}) == "p0");
    CHECK(field_of(PowerLawPolicy{1.0, -1, 0.5, 0}) == "m");
    CHECK(field_of(PowerLawPolicy{1.0, 0, 0.5, -2}) == "n");
    CHECK(field_of(TabulatedPolicy{{{0.5, 0.5}, {1.2, 0.5}}}) == "table");
    CHECK(field_of(PowerLawPolicy{1.0, 3, 0.5, 2}).empty());
    CHECK_THROWS_AS((GameParams{0.0, 3.0}.validate()), ValidationError);
    CHECK_THROWS_AS((GameParams{1.0, -1.0}.validate()), ValidationError);
}

TEST_CASE("trustor_payoff") {
    const GameParams g{1.0, 3.0};
    CHECK(trustor_payoff(g, 1.0, {3.0 * 1.0 * 1.0 * 1.0, true}) == 3.0);
    CHECK(trustor_payoff(GameParams{1.0, 7.0}, 0.0, {0.0, false}) == 1.0);
    CHECK(trustor_payoff(g, 0.5, {3.0 * 0.5 * 1.0 * 0.5, true}) == 1.25);
}

TEST_CASE("trustee_respond uses a strict u < p comparison") {
    const GameParams g{1.0, 3.0};
    SUBCASE("p = 0 never returns") {
        ScriptedSource rng({0.0}, {});
        const auto out = trustee_respond(g, PowerLawPolicy{1.0, 0, 0.0, 0}, 1.0, rng);
        CHECK_FALSE(out.was_positive_return);
        CHECK(out.returned == 0.0);
    }
    SUBCASE("p = 1 returns for u = 0.999") {
        ScriptedSource rng({0.999}, {});
        CHECK(trustee_respond(g, PowerLawPolicy{1.0, 0, 1.0, 0}, 1.0, rng).was_positive_return);
    }
    SUBCASE("forced u = 0.2 against p = 0.5") {
        ScriptedSource rng({0.2}, {});
        const auto out = trustee_respond(g, PowerLawPolicy{1.0, 0, 0.5, 0}, 1.0, rng);
        CHECK(out.was_positive_return);
        CHECK(out.returned == 3.0);
    }
    SUBCASE("u equal to p is a failure") {
        CHECK_FALSE(trustee_respond_with(g, PowerLawPolicy{1.0, 0, 0.5, 0}, 1.0, 0.5).was_positive_return);
    }
}

TEST_CASE("expected_trustor_reward") {
    CHECK(expected_trustor_reward({2.5, 3.0}, PowerLawPolicy{0.3, 1, 0.9, 2}, 0.0) == 2.5);
    CHECK(expected_trustor_reward({1.0, 3.0}, PowerLawPolicy{1.0, 0, 0.5, 0}, 1.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(expected_trustor_reward({1.0, 3.0}, PowerLawPolicy{0.5, 0, 0.5, 0}, 1.0) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("property: outputs in range, wealth conserved, reward identity") {
    SeededSource rng(7);
    const ActionGrid grid;
    for (int trial = 0; trial < 500; ++trial) {
        const PowerLawPolicy law{rng.uniform(), static_cast<int>(rng.uniform() * 4), rng.uniform(),
                                 static_cast<int>(rng.uniform() * 4)};
        const GameParams g{0.5 + 10.0 * rng.uniform(), 0.1 + 5.0 * rng.uniform()};
        for (int k = 0; k < grid.count(); ++k) {
            const double r = grid.fraction(k);
            const auto [alpha, p] = eval_policy(law, r);
            REQUIRE(alpha >= 0.0);
            REQUIRE(alpha <= 1.0);
            REQUIRE(p >= 0.0);
            REQUIRE(p <= 1.0);

            const auto outcome = trustee_respond(g, law, r, rng);
            if (!outcome.was_positive_return) REQUIRE(outcome.returned == 0.0);
            const double total = trustor_payoff(g, r, outcome) + trustee_net(g, r, outcome);
            REQUIRE(total == doctest::Approx(g.endowment + (g.multiplier - 1.0) * r * g.endowment).epsilon(1e-12));

            const double branches = p * trustor_payoff(g, r, {g.multiplier * r * g.endowment * alpha, true}) +
                                    (1.0 - p) * trustor_payoff(g, r, {0.0, false});
            REQUIRE(std::abs(expected_trustor_reward(g, law, r) - branches) < 1e-12);
        }
    }
}

TEST_CASE("property: endpoints of the return probability are exact") {
    SeededSource rng(11);
    const GameParams g{1.0, 3.0};
    for (int i = 0; i < 10000; ++i) {
        CHECK_FALSE(trustee_respond(g, PowerLawPolicy{1.0, 0, 0.0, 0}, 0.6, rng).was_positive_return);
        CHECK(trustee_respond(g, PowerLawPolicy{1.0, 0, 1.0, 0}, 0.6, rng).was_positive_return);
    }
}

TEST_CASE("monte carlo payoff mean matches the expected reward") {
    SeededSource rng(2024);
    const GameParams g{1.0, 3.0};
    const PowerLawPolicy law{0.8, 1, 0.6, 1};
    const double r = 0.7;
    constexpr int draws = 100000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double x = trustor_payoff(g, r, trustee_respond(g, law, r, rng));
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / draws;
    const double se = std::sqrt((sum_sq / draws - mean * mean) / draws);
    CHECK(std::abs(mean - expected_trustor_reward(g, law, r)) < 4.0 * se);
}

TEST_CASE("arm table works for other scalar types") {
    const GameParams g{1.0, 3.0};
    const PowerLawPolicy law{1.0, 2, 0.5, 2};
    const ActionGrid grid;
    const auto d = arm_table<double>(g, law, grid);
    const auto ld = arm_table<long double>(g, law, grid);
    const Eigen::ArrayXd expected = d.expected_rewards();
    const auto expected_ld = ld.expected_rewards().eval();
    for (int k = 0; k < grid.count(); ++k) {
        CHECK(static_cast<double>(expected_ld(k)) == doctest::Approx(expected(k)).epsilon(1e-14));
        CHECK(expected(k) == doctest::Approx(expected_trustor_reward(g, law, grid.fraction(k))).epsilon(1e-14));
    }
    CHECK(d.stay(0) == 1.0);
    CHECK(d.gain(0) == 0.0);
}
