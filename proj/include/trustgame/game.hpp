#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

namespace trustgame {

/// Endowment T handed to the trustor and the multiplier K applied to the transfer.
struct GameParams {
    double endowment = 1.0;
    double multiplier = 3.0;

    void validate() const;
};

/// alpha(r) = alpha0 * r^m returned with probability p(r) = p0 * r^n (0^0 = 1).
struct PowerLawPolicy {
    double alpha0 = 1.0;
    int m = 0;
    double p0 = 0.5;
    int n = 0;
};

/// One (alpha, p) pair per grid index; only defined on grid fractions.
struct TabulatedPolicy {
    struct Entry {
        double alpha;
        double p;
    };
    std::vector<Entry> table;
};

using TrusteePolicy = std::variant<PowerLawPolicy, TabulatedPolicy>;

void validate(const TrusteePolicy& policy);

/// Finite transfer-fraction set {0, 1/(count-1), ..., 1}. Fractions are always
/// derived from the integer index so 0.1-spaced grids carry no drift.
class ActionGrid {
public:
    explicit ActionGrid(int count = 11);

    int count() const { return count_; }
    double fraction(int index) const;
    /// Index of a fraction lying on the grid; throws std::domain_error otherwise.
    int index_of(double r) const;
    bool contains(int index) const { return index >= 0 && index < count_; }

    /// All fractions as a column array, ready for coefficient-wise expressions.
    Eigen::ArrayXd fractions() const;

    bool operator==(const ActionGrid&) const = default;

private:
    int count_;
};

struct TrusteeOutcome {
    double returned = 0.0;
    bool was_positive_return = false;
};

struct PolicyValue {
    double alpha;
    double p;
};

PolicyValue eval_policy(const TrusteePolicy& policy, double r);

/// alpha0 * p0 * K for power-law policies.
double trust_product(const PowerLawPolicy& policy, double multiplier);

/// T - rT + returned.
double trustor_payoff(const GameParams& params, double r, const TrusteeOutcome& outcome);

/// What the trustee keeps: KrT - returned.
double trustee_net(const GameParams& params, double r, const TrusteeOutcome& outcome);

/// T + (alpha(r) p(r) K - 1) r T
double expected_trustor_reward(const GameParams& params, const TrusteePolicy& policy, double r);

/// Outcome for a known uniform draw u in [0,1): returns iff u < p(r).
TrusteeOutcome trustee_respond_with(const GameParams& params, const TrusteePolicy& policy,
                                    double r, double u);

template <class Source>
TrusteeOutcome trustee_respond(const GameParams& params, const TrusteePolicy& policy, double r,
                               Source& rng) {
    return trustee_respond_with(params, policy, r, rng.uniform());
}

/// Per-arm quantities of one game on a grid. The score of arm r under a
/// success-probability estimate q is stay + gain * q, where stay = T - rT and
/// gain = K r T alpha(r).
template <typename Scalar>
struct ArmTable {
    using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

    Array fraction;
    Array alpha;
    Array p;
    Array stay;
    Array gain;

    Eigen::Index size() const { return fraction.size(); }

    template <typename Derived>
    auto scores(const Eigen::ArrayBase<Derived>& success_estimate) const {
        return stay + gain * success_estimate;
    }

    auto expected_rewards() const { return stay + gain * p; }
};

template <typename Scalar = double>
ArmTable<Scalar> arm_table(const GameParams& params, const TrusteePolicy& policy,
                           const ActionGrid& grid) {
    const auto count = static_cast<Eigen::Index>(grid.count());
    ArmTable<Scalar> table;
    table.fraction.resize(count);
    table.alpha.resize(count);
    table.p.resize(count);
    for (Eigen::Index i = 0; i < count; ++i) {
        const double r = grid.fraction(static_cast<int>(i));
        const auto value = eval_policy(policy, r);
        table.fraction(i) = static_cast<Scalar>(r);
        table.alpha(i) = static_cast<Scalar>(value.alpha);
        table.p(i) = static_cast<Scalar>(value.p);
    }
    const auto endowment = static_cast<Scalar>(params.endowment);
    const auto multiplier = static_cast<Scalar>(params.multiplier);
    table.stay = endowment - table.fraction * endowment;
    table.gain = multiplier * table.fraction * endowment * table.alpha;
    return table;
}

/// Checks that a tabulated policy lines up with the grid it will be played on.
void check_compatible(const TrusteePolicy& policy, const ActionGrid& grid);

}  // namespace trustgame
