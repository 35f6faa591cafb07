#include "trustgame/oracle.hpp"

#include <algorithm>

namespace trustgame {

std::string_view to_string(TrustRegime regime) {
    switch (regime) {
        case TrustRegime::FullTrust: return "FullTrust";
        case TrustRegime::NoTrust: return "NoTrust";
        case TrustRegime::Indifferent: return "Indifferent";
        case TrustRegime::NotApplicable: return "NotApplicable";
    }
    return "NotApplicable";
}

bool OracleVerdict::is_optimal(int arm) const {
    return std::find(optimal_set.begin(), optimal_set.end(), arm) != optimal_set.end();
}

double objective(const TrusteePolicy& policy, double multiplier, double r) {
    const auto [alpha, p] = eval_policy(policy, r);
    return (alpha * p * multiplier - 1.0) * r + 0.0;  // + 0.0 folds -0 into 0
}

Eigen::ArrayXd objective_values(const TrusteePolicy& policy, double multiplier,
                                const ActionGrid& grid) {
    check_compatible(policy, grid);
    // T = 1 so that stay/gain reduce to the dimensionless objective terms.
    const auto arms = arm_table<double>(GameParams{1.0, multiplier}, policy, grid);
    return (arms.alpha * arms.p * multiplier - 1.0) * arms.fraction + 0.0;
}

std::vector<int> argmax_set(const Eigen::Ref<const Eigen::ArrayXd>& values, double tolerance) {
    std::vector<int> best;
    if (values.size() == 0) return best;
    const double top = values.maxCoeff();
    for (Eigen::Index k = 0; k < values.size(); ++k)
        if (top - values(k) <= tolerance) best.push_back(static_cast<int>(k));
    return best;
}

TrustRegime classify(double alpha0, double p0, double multiplier) {
    const double product = alpha0 * p0 * multiplier;
    if (product > 1.0) return TrustRegime::FullTrust;
    if (product < 1.0) return TrustRegime::NoTrust;
    return TrustRegime::Indifferent;
}

OracleVerdict grid_argmax(const TrusteePolicy& policy, double multiplier, const ActionGrid& grid) {
    OracleVerdict verdict;
    verdict.objective_values = objective_values(policy, multiplier, grid);
    verdict.optimal_set = argmax_set(verdict.objective_values);
    if (const auto* law = std::get_if<PowerLawPolicy>(&policy))
        verdict.classification = classify(law->alpha0, law->p0, multiplier);
    return verdict;
}

}  // namespace trustgame
