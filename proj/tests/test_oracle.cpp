#include "doctest.h"

#include "trustgame/game.hpp"
#include "trustgame/oracle.hpp"

#include <cmath>
#include <vector>

using namespace trustgame;

namespace {

// Brute force, kept off the library's objective path: evaluate the power law
// with std::pow and mix the two payoff branches by hand.
std::vector<int> brute_force_maximizers(double alpha0, int m, double p0, int n, double K, double T,
                                        int count = 11) {
    std::vector<double> reward(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double r = (i == count - 1) ? 1.0 : static_cast<double>(i) / (count - 1);
        const double alpha = alpha0 * std::pow(r, m);
        const double p = p0 * std::pow(r, n);
        reward[static_cast<std::size_t>(i)] = p * (T - r * T + K * r * T * alpha) + (1.0 - p) * (T - r * T);
    }
    double top = reward[0];
    for (double v : reward) top = std::max(top, v);
    std::vector<int> best;
    for (int i = 0; i < count; ++i)
        if (top - reward[static_cast<std::size_t>(i)] <= 1e-12 * T) best.push_back(i);
    return best;
}

struct ReferenceConfig {
    double alpha0;
    int power;
};

}  // namespace

TEST_CASE("objective") {
    CHECK(objective(PowerLawPolicy{0.4, 2, 0.9, 1}, 3.0, 0.0) == 0.0);
    CHECK(objective(PowerLawPolicy{1.0, 0, 0.5, 0}, 3.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(objective(PowerLawPolicy{0.5, 2, 0.5, 2}, 3.0, 0.5) == -0.4765625);

    TabulatedPolicy tab{std::vector<TabulatedPolicy::Entry>(11, {0.5, 0.5})};
    CHECK_THROWS_AS(objective(tab, 3.0, 0.55), std::domain_error);
}

TEST_CASE("classify") {
    CHECK(classify(0.5, 0.5, 3.0) == TrustRegime::NoTrust);
    CHECK(classify(1.0, 0.5, 3.0) == TrustRegime::FullTrust);
    CHECK(classify(1.0, 1.0, 1.0) == TrustRegime::Indifferent);
    CHECK(to_string(TrustRegime::FullTrust) == "FullTrust");
}

TEST_CASE("grid_argmax") {
    const ActionGrid grid;
    SUBCASE("no trust") {
        const auto v = grid_argmax(PowerLawPolicy{0.5, 0, 0.5, 0}, 3.0, grid);
        CHECK(v.optimal_set == std::vector<int>{0});
        CHECK(v.classification == TrustRegime::NoTrust);
    }
    SUBCASE("full trust") {
        const auto v = grid_argmax(PowerLawPolicy{1.0, 1, 0.5, 1}, 3.0, grid);
        CHECK(v.optimal_set == std::vector<int>{10});
        CHECK(v.classification == TrustRegime::FullTrust);
    }
    SUBCASE("indifferent on any grid") {
        for (int count : {2, 5, 11, 21}) {
            const auto v = grid_argmax(PowerLawPolicy{1.0, 0, 1.0, 0}, 1.0, ActionGrid(count));
            CHECK(v.optimal_set.size() == static_cast<std::size_t>(count));
            CHECK((v.objective_values == 0.0).all());
            CHECK(v.classification == TrustRegime::Indifferent);
        }
    }
    SUBCASE("tabulated interior optimum is not classified") {
        TabulatedPolicy tab;
        for (int i = 0; i < 11; ++i) tab.table.push_back({i == 4 ? 1.0 : 0.0, i == 4 ? 1.0 : 0.0});
        const auto v = grid_argmax(tab, 3.0, grid);
        CHECK(v.optimal_set == std::vector<int>{4});
        CHECK(v.classification == TrustRegime::NotApplicable);
    }
    SUBCASE("tabulated size must match the grid") {
        TabulatedPolicy tab{std::vector<TabulatedPolicy::Entry>(5, {0.5, 0.5})};
        CHECK_THROWS(grid_argmax(tab, 3.0, grid));
    }
}

TEST_CASE("property: oracle equals brute force across the sweep, T-invariantly") {
    const ActionGrid grid;
    int mismatches = 0;
    int checked = 0;
    for (int a = 0; a <= 10; ++a)
        for (int b = 0; b <= 10; ++b)
            for (double K : {0.5, 1.0, 2.0, 3.0, 5.0})
                for (int m = 0; m <= 3; ++m)
                    for (int n = 0; n <= 3; ++n) {
                        const double alpha0 = a / 10.0, p0 = b / 10.0;
                        const PowerLawPolicy law{alpha0, m, p0, n};
                        const auto verdict = grid_argmax(law, K, grid);
                        const auto brute = brute_force_maximizers(alpha0, m, p0, n, K, 1.0);
                        if (verdict.optimal_set != brute) ++mismatches;
                        if (brute_force_maximizers(alpha0, m, p0, n, K, 1000.0) != brute) ++mismatches;
                        ++checked;

                        CHECK(objective(law, K, 0.0) == 0.0);
                        if (verdict.classification == TrustRegime::FullTrust) CHECK(verdict.is_optimal(10));
                        if (verdict.classification == TrustRegime::NoTrust) CHECK(verdict.is_optimal(0));
                    }
    CHECK(checked == 11 * 11 * 5 * 16);
    CHECK(mismatches == 0);
}

TEST_CASE("reference configurations have a unique endpoint optimum") {
    const ActionGrid grid;
    for (const auto cfg : {ReferenceConfig{0.5, 0}, ReferenceConfig{0.5, 1}, ReferenceConfig{0.5, 2},
                           ReferenceConfig{1.0, 0}, ReferenceConfig{1.0, 1},
                           ReferenceConfig{1.0, 2}}) {
        const auto v = grid_argmax(PowerLawPolicy{cfg.alpha0, cfg.power, 0.5, cfg.power}, 3.0, grid);
        CHECK(v.optimal_set == std::vector<int>{cfg.alpha0 < 1.0 ? 0 : 10});
    }
}
