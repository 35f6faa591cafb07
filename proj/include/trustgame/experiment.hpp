#pragma once

#include "trustgame/agent.hpp"
#include "trustgame/game.hpp"
#include "trustgame/oracle.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace trustgame {

struct ExperimentConfig {
    GameParams params;
    TrusteePolicy policy = PowerLawPolicy{};
    ActionGrid grid;
    std::int64_t trials = 20000;
    int agents = 10;
    std::uint64_t base_seed = 42;
    std::int64_t record_every = 10;

    void validate() const;
    Game game() const { return make_game(params, policy, grid); }
};

/// Chosen arms of every agent in a batch, agent-major.
struct BatchRuns {
    ActionGrid grid;
    std::vector<std::uint64_t> seeds;
    std::vector<std::vector<int>> choices;
};

/// Row t, column k: across-agent mean of (times arm k was chosen in trials
/// 1..checkpoints[t]) / checkpoints[t].
struct FrequencyCurves {
    std::vector<std::int64_t> checkpoints;
    Eigen::ArrayXd fractions;
    Eigen::MatrixXd mean_freq;

    bool operator==(const FrequencyCurves& other) const;
};

struct AgentConvergence {
    int agent_index = 0;
    std::uint64_t seed = 0;
    int modal_arm = 0;
    double oracle_share = 0.0;
    bool match = false;
};

struct ConvergenceReport {
    std::int64_t window = 0;
    std::vector<int> optimal_set;
    TrustRegime classification = TrustRegime::NotApplicable;
    std::vector<AgentConvergence> agents;
    int modal_arm = 0;        // over the pooled final windows
    double oracle_share = 0.0;
    bool match = false;
    int agents_matched = 0;
};

/// Trial 1, every multiple of `stride`, and the final trial.
std::vector<std::int64_t> checkpoints(std::int64_t trials, std::int64_t stride);

std::vector<TrialRecord> run_single(const ExperimentConfig& config, int agent_index);

/// Same trajectory as run_single, keeping only the chosen arms.
std::vector<int> run_choices(const ExperimentConfig& config, int agent_index);

/// All agents, run on up to `threads` workers (0 = hardware concurrency).
/// The result does not depend on the thread count.
BatchRuns run_agents(const ExperimentConfig& config, unsigned threads = 0);

FrequencyCurves frequency_curves(const BatchRuns& runs,
                                 const std::vector<std::int64_t>& checkpoint_trials);

FrequencyCurves run_batch(const ExperimentConfig& config);

/// Most frequent arm among `choices[from, end)`; ties go to the lowest index.
int modal_arm(const std::vector<int>& choices, std::size_t from, int arm_count);

ConvergenceReport convergence_report(const BatchRuns& runs, const OracleVerdict& verdict,
                                     std::int64_t window);

}  // namespace trustgame
