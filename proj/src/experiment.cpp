#include "trustgame/experiment.hpp"

#include "trustgame/errors.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

namespace trustgame {
namespace {

template <class Sink>
void play(const Game& game, std::int64_t trials, std::uint64_t seed, Sink&& sink) {
    SeededSource rng(seed);
    auto state = new_agent(game.grid);
    for (std::int64_t i = 0; i < trials; ++i) sink(step(state, game, rng));
}

void require_agent(const ExperimentConfig& config, int agent_index) {
    if (agent_index < 0 || agent_index >= config.agents)
        throw std::out_of_range("agent index " + std::to_string(agent_index) + " outside batch of " +
                                std::to_string(config.agents));
}

}  // namespace

void ExperimentConfig::validate() const {
    params.validate();
    trustgame::validate(policy);
    check_compatible(policy, grid);
    if (trials < 1) throw ValidationError("trials", "trials must be at least 1");
    if (agents < 1) throw ValidationError("agents", "agents must be at least 1");
    if (record_every < 1) throw ValidationError("record-every", "record-every must be at least 1");
}

bool FrequencyCurves::operator==(const FrequencyCurves& other) const {
    return checkpoints == other.checkpoints && fractions.size() == other.fractions.size() &&
           (fractions == other.fractions).all() && mean_freq.rows() == other.mean_freq.rows() &&
           mean_freq.cols() == other.mean_freq.cols() && mean_freq == other.mean_freq;
}

std::vector<std::int64_t> checkpoints(std::int64_t trials, std::int64_t stride) {
    if (trials < 1 || stride < 1) throw std::invalid_argument("checkpoints: trials and stride must be positive");
    std::vector<std::int64_t> out{1};
    for (std::int64_t t = stride; t <= trials; t += stride)
        if (t != out.back()) out.push_back(t);
    if (out.back() != trials) out.push_back(trials);
    return out;
}

std::vector<TrialRecord> run_single(const ExperimentConfig& config, int agent_index) {
    config.validate();
    require_agent(config, agent_index);
    std::vector<TrialRecord> records;
    records.reserve(static_cast<std::size_t>(config.trials));
    play(config.game(), config.trials, child_seed(config.base_seed, agent_index),
         [&](TrialRecord&& record) { records.push_back(std::move(record)); });
    return records;
}

std::vector<int> run_choices(const ExperimentConfig& config, int agent_index) {
    config.validate();
    require_agent(config, agent_index);
    std::vector<int> choices;
    choices.reserve(static_cast<std::size_t>(config.trials));
    play(config.game(), config.trials, child_seed(config.base_seed, agent_index),
         [&](const TrialRecord& record) { choices.push_back(record.chosen_arm); });
    return choices;
}

BatchRuns run_agents(const ExperimentConfig& config, unsigned threads) {
    config.validate();
    const auto agents = static_cast<std::size_t>(config.agents);
    BatchRuns runs{config.grid, std::vector<std::uint64_t>(agents), std::vector<std::vector<int>>(agents)};
    for (std::size_t a = 0; a < agents; ++a) runs.seeds[a] = child_seed(config.base_seed, a);

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, agents));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t a = next++; a < agents; a = next++)
            runs.choices[a] = run_choices(config, static_cast<int>(a));
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    return runs;
}

FrequencyCurves frequency_curves(const BatchRuns& runs,
                                 const std::vector<std::int64_t>& checkpoint_trials) {
    if (runs.choices.empty()) throw std::invalid_argument("frequency_curves: no agents");
    const int arms = runs.grid.count();
    const auto rows = static_cast<Eigen::Index>(checkpoint_trials.size());

    // Integer totals keep the across-agent mean independent of agent order.
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> totals =
        Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(rows, arms);
    for (const auto& choices : runs.choices) {
        CountArray counts = CountArray::Zero(arms);
        std::size_t played = 0;
        for (Eigen::Index row = 0; row < rows; ++row) {
            const auto until = static_cast<std::size_t>(checkpoint_trials[static_cast<std::size_t>(row)]);
            if (until > choices.size() || until < played)
                throw std::invalid_argument("frequency_curves: checkpoints must be increasing and within the run");
            for (; played < until; ++played) ++counts(choices[played]);
            totals.row(row) += counts.matrix().transpose();
        }
    }

    FrequencyCurves curves{checkpoint_trials, runs.grid.fractions(), Eigen::MatrixXd(rows, arms)};
    const auto agents = static_cast<double>(runs.choices.size());
    for (Eigen::Index row = 0; row < rows; ++row) {
        const double denom = agents * static_cast<double>(checkpoint_trials[static_cast<std::size_t>(row)]);
        curves.mean_freq.row(row) = totals.row(row).cast<double>() / denom;
    }
    return curves;
}

FrequencyCurves run_batch(const ExperimentConfig& config) {
    return frequency_curves(run_agents(config), checkpoints(config.trials, config.record_every));
}

int modal_arm(const std::vector<int>& choices, std::size_t from, int arm_count) {
    std::vector<std::int64_t> tally(static_cast<std::size_t>(arm_count), 0);
    for (std::size_t i = from; i < choices.size(); ++i) ++tally[static_cast<std::size_t>(choices[i])];
    return static_cast<int>(std::max_element(tally.begin(), tally.end()) - tally.begin());
}

ConvergenceReport convergence_report(const BatchRuns& runs, const OracleVerdict& verdict,
                                     std::int64_t window) {
    if (window < 1) throw ValidationError("window", "window must be at least 1");
    const int arms = runs.grid.count();
    std::vector<std::int64_t> pooled(static_cast<std::size_t>(arms), 0);
    std::int64_t pooled_total = 0;
    std::int64_t pooled_on_oracle = 0;

    ConvergenceReport report;
    report.window = window;
    report.optimal_set = verdict.optimal_set;
    report.classification = verdict.classification;
    for (std::size_t a = 0; a < runs.choices.size(); ++a) {
        const auto& choices = runs.choices[a];
        if (static_cast<std::size_t>(window) > choices.size())
            throw ValidationError("window", "window " + std::to_string(window) + " exceeds the " +
                                                std::to_string(choices.size()) + " trials run");
        const std::size_t from = choices.size() - static_cast<std::size_t>(window);
        std::int64_t on_oracle = 0;
        for (std::size_t i = from; i < choices.size(); ++i) {
            ++pooled[static_cast<std::size_t>(choices[i])];
            if (verdict.is_optimal(choices[i])) ++on_oracle;
        }
        AgentConvergence agent;
        agent.agent_index = static_cast<int>(a);
        agent.seed = a < runs.seeds.size() ? runs.seeds[a] : 0;
        agent.modal_arm = modal_arm(choices, from, arms);
        agent.oracle_share = static_cast<double>(on_oracle) / static_cast<double>(window);
        agent.match = verdict.is_optimal(agent.modal_arm);
        if (agent.match) ++report.agents_matched;
        report.agents.push_back(agent);
        pooled_total += window;
        pooled_on_oracle += on_oracle;
    }
    report.modal_arm = static_cast<int>(std::max_element(pooled.begin(), pooled.end()) - pooled.begin());
    report.oracle_share = pooled_total > 0 ? static_cast<double>(pooled_on_oracle) / static_cast<double>(pooled_total) : 0.0;
    report.match = verdict.is_optimal(report.modal_arm);
    return report;
}

}  // namespace trustgame
