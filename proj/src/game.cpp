#include "trustgame/game.hpp"

#include "trustgame/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace trustgame {
namespace {

constexpr double kGridTolerance = 1e-12;

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

// Repeated multiplication; ipow(x, 0) == 1 for every x, including 0.
double ipow(double base, int exponent) {
    double result = 1.0;
    for (int k = 0; k < exponent; ++k) result *= base;
    return result;
}

void require_unit(double r) {
    if (!in_unit_interval(r))
        throw std::domain_error("transfer fraction " + std::to_string(r) + " outside [0,1]");
}

}  // namespace

void GameParams::validate() const {
    if (!(endowment > 0.0) || !std::isfinite(endowment))
        throw ValidationError("T", "T must be positive");
    if (!(multiplier > 0.0) || !std::isfinite(multiplier))
        throw ValidationError("K", "K must be positive");
}

void validate(const TrusteePolicy& policy) {
    if (const auto* law = std::get_if<PowerLawPolicy>(&policy)) {
        if (!in_unit_interval(law->alpha0))
            throw ValidationError("alpha0", "alpha0 must lie in [0,1]");
        if (!in_unit_interval(law->p0)) throw ValidationError("p0", "p0 must lie in [0,1]");
        if (law->m < 0) throw ValidationError("m", "m must be a non-negative integer");
        if (law->n < 0) throw ValidationError("n", "n must be a non-negative integer");
        return;
    }
    const auto& tab = std::get<TabulatedPolicy>(policy);
    if (tab.table.size() < 2)
        throw ValidationError("table", "tabulated policy needs at least two grid points");
    for (std::size_t i = 0; i < tab.table.size(); ++i) {
        if (!in_unit_interval(tab.table[i].alpha))
            throw ValidationError("table", "alpha at grid index " + std::to_string(i) +
                                               " must lie in [0,1]");
        if (!in_unit_interval(tab.table[i].p))
            throw ValidationError("table",
                                  "p at grid index " + std::to_string(i) + " must lie in [0,1]");
    }
}

ActionGrid::ActionGrid(int count) : count_(count) {
    if (count < 2) throw ValidationError("grid", "grid must have at least 2 arms");
}

double ActionGrid::fraction(int index) const {
    if (!contains(index)) throw std::out_of_range("arm index " + std::to_string(index));
    if (index == count_ - 1) return 1.0;
    return static_cast<double>(index) / static_cast<double>(count_ - 1);
}

int ActionGrid::index_of(double r) const {
    require_unit(r);
    const auto index = static_cast<int>(std::lround(r * (count_ - 1)));
    if (std::abs(fraction(index) - r) > kGridTolerance)
        throw std::domain_error("fraction " + std::to_string(r) + " is not on the " +
                                std::to_string(count_) + "-point grid");
    return index;
}

Eigen::ArrayXd ActionGrid::fractions() const {
    Eigen::ArrayXd out(count_);
    for (int i = 0; i < count_; ++i) out(i) = fraction(i);
    return out;
}

PolicyValue eval_policy(const TrusteePolicy& policy, double r) {
    require_unit(r);
    if (const auto* law = std::get_if<PowerLawPolicy>(&policy))
        return {law->alpha0 * ipow(r, law->m), law->p0 * ipow(r, law->n)};
    const auto& tab = std::get<TabulatedPolicy>(policy);
    const ActionGrid grid(static_cast<int>(tab.table.size()));
    const auto& entry = tab.table[static_cast<std::size_t>(grid.index_of(r))];
    return {entry.alpha, entry.p};
}

double trust_product(const PowerLawPolicy& policy, double multiplier) {
    return policy.alpha0 * policy.p0 * multiplier;
}

double trustor_payoff(const GameParams& params, double r, const TrusteeOutcome& outcome) {
    require_unit(r);
    return params.endowment - r * params.endowment + outcome.returned;
}

double trustee_net(const GameParams& params, double r, const TrusteeOutcome& outcome) {
    return params.multiplier * r * params.endowment - outcome.returned;
}

double expected_trustor_reward(const GameParams& params, const TrusteePolicy& policy, double r) {
    const auto [alpha, p] = eval_policy(policy, r);
    return params.endowment + (alpha * p * params.multiplier - 1.0) * r * params.endowment;
}

TrusteeOutcome trustee_respond_with(const GameParams& params, const TrusteePolicy& policy,
                                    double r, double u) {
    const auto [alpha, p] = eval_policy(policy, r);
    if (u < p) return {params.multiplier * r * params.endowment * alpha, true};
    return {0.0, false};
}

void check_compatible(const TrusteePolicy& policy, const ActionGrid& grid) {
    if (const auto* tab = std::get_if<TabulatedPolicy>(&policy)) {
        if (static_cast<int>(tab->table.size()) != grid.count())
            throw ValidationError("table", "tabulated policy has " +
                                               std::to_string(tab->table.size()) +
                                               " entries but the grid has " +
                                               std::to_string(grid.count()) + " arms");
    }
}

}  // namespace trustgame
