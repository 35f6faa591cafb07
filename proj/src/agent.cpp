#include "trustgame/agent.hpp"

#include <stdexcept>
#include <string>

namespace trustgame {

Game make_game(const GameParams& params, const TrusteePolicy& policy, const ActionGrid& grid) {
    params.validate();
    validate(policy);
    check_compatible(policy, grid);
    return Game{params, policy, grid, arm_table<double>(params, policy, grid)};
}

double AgentState::posterior_mean(int arm) const {
    if (!grid.contains(arm)) throw std::out_of_range("arm index " + std::to_string(arm));
    const auto s = static_cast<double>(successes(arm));
    const auto f = static_cast<double>(failures(arm));
    return (s + 1.0) / (s + f + 2.0);
}

AgentState new_agent(const ActionGrid& grid) {
    return AgentState{grid, CountArray::Zero(grid.count()), CountArray::Zero(grid.count())};
}

int select_arm(const Eigen::Ref<const Eigen::ArrayXd>& scores) {
    if (scores.size() == 0) throw std::invalid_argument("select_arm: empty score list");
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < scores.size(); ++k)
        if (scores(k) > scores(best)) best = k;
    return static_cast<int>(best);
}

void update(AgentState& state, int arm, bool was_positive_return) {
    if (!state.grid.contains(arm)) throw std::out_of_range("arm index " + std::to_string(arm));
    if (was_positive_return)
        ++state.successes(arm);
    else
        ++state.failures(arm);
}

}  // namespace trustgame
