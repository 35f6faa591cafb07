#pragma once

#include "trustgame/game.hpp"
#include "trustgame/random.hpp"

#include <Eigen/Core>

#include <cstdint>

namespace trustgame {

using CountArray = Eigen::Array<std::int64_t, Eigen::Dynamic, 1>;

/// Everything fixed about the environment the trustor plays in, with the
/// per-arm stay/gain terms precomputed.
struct Game {
    GameParams params;
    TrusteePolicy policy;
    ActionGrid grid;
    ArmTable<double> arms;
};

/// Validates the pieces and builds the per-arm table.
Game make_game(const GameParams& params, const TrusteePolicy& policy, const ActionGrid& grid);

/// Success/failure counts per arm. Arm k's posterior over the trustee's return
/// probability is Beta(successes[k] + 1, failures[k] + 1).
struct AgentState {
    ActionGrid grid;
    CountArray successes;
    CountArray failures;

    std::int64_t trials() const { return successes.sum() + failures.sum(); }
    double posterior_mean(int arm) const;
};

struct TrialRecord {
    std::int64_t trial_index = 0;  // 1-based
    int chosen_arm = 0;
    Eigen::ArrayXd sampled_scores;
    TrusteeOutcome outcome;
    double trustor_payoff = 0.0;
};

AgentState new_agent(const ActionGrid& grid);

/// One posterior draw per arm, arm 0 first.
template <RandomSource Source>
Eigen::ArrayXd draw_posteriors(const AgentState& state, Source& rng) {
    Eigen::ArrayXd draws(state.successes.size());
    for (Eigen::Index k = 0; k < draws.size(); ++k)
        draws(k) = rng.beta(static_cast<double>(state.successes(k) + 1),
                            static_cast<double>(state.failures(k) + 1));
    return draws;
}

/// s_r = (T - rT + K r T alpha(r)) beta_r + (T - rT)(1 - beta_r). The known
/// return fraction alpha(r) enters directly; only p(r) is replaced by a
/// posterior draw.
template <RandomSource Source>
Eigen::ArrayXd sample_scores(const AgentState& state, const Game& game, Source& rng) {
    return game.arms.scores(draw_posteriors(state, rng));
}

/// Index of the largest score; ties go to the lowest index.
int select_arm(const Eigen::Ref<const Eigen::ArrayXd>& scores);

/// Records one success (trustee returned something) or one failure on `arm`.
void update(AgentState& state, int arm, bool was_positive_return);

/// One full round: sample scores, pick the arm, let the trustee respond,
/// update the posterior. Draw order is beta for arms 0..count-1, then u.
template <RandomSource Source>
TrialRecord step(AgentState& state, const Game& game, Source& rng) {
    TrialRecord record;
    record.trial_index = state.trials() + 1;
    record.sampled_scores = sample_scores(state, game, rng);
    record.chosen_arm = select_arm(record.sampled_scores);
    const double r = game.grid.fraction(record.chosen_arm);
    record.outcome = trustee_respond(game.params, game.policy, r, rng);
    record.trustor_payoff = trustor_payoff(game.params, r, record.outcome);
    update(state, record.chosen_arm, record.outcome.was_positive_return);
    return record;
}

}  // namespace trustgame
