#pragma once

#include "trustgame/game.hpp"

#include <Eigen/Core>

#include <string_view>
#include <vector>

namespace trustgame {

enum class TrustRegime { FullTrust, NoTrust, Indifferent, NotApplicable };

std::string_view to_string(TrustRegime regime);

/// Maximizers of the trustor's objective on the grid, plus the closed-form
/// regime when the policy is a power law.
struct OracleVerdict {
    std::vector<int> optimal_set;
    Eigen::ArrayXd objective_values;
    TrustRegime classification = TrustRegime::NotApplicable;

    bool is_optimal(int arm) const;
};

/// Ties in grid_argmax are detected with this absolute tolerance.
inline constexpr double kTieTolerance = 1e-12;

/// (alpha(r) p(r) K - 1) r. Expected trustor reward is T (1 + objective).
double objective(const TrusteePolicy& policy, double multiplier, double r);

/// Objective over the whole grid, coefficient-wise.
Eigen::ArrayXd objective_values(const TrusteePolicy& policy, double multiplier,
                                const ActionGrid& grid);

/// All indices whose value is within `tolerance` of the maximum.
std::vector<int> argmax_set(const Eigen::Ref<const Eigen::ArrayXd>& values,
                            double tolerance = kTieTolerance);

/// Compares alpha0 p0 K to 1 exactly.
TrustRegime classify(double alpha0, double p0, double multiplier);

OracleVerdict grid_argmax(const TrusteePolicy& policy, double multiplier, const ActionGrid& grid);

}  // namespace trustgame
