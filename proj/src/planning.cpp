#include "maxent/planning.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace maxent {

namespace {

Matrix action_values(const TabularMDP& mdp, const Vector& reward, const Vector& values) {
    Matrix q(mdp.n_states(), mdp.n_actions());
    for (int a = 0; a < mdp.n_actions(); ++a) {
        q.col(a) = reward + mdp.gamma() * (mdp.action_matrix(a).transpose() * values);
    }
    return q;
}

} // namespace

std::vector<int> greedy_actions(const TabularMDP& mdp, const Vector& reward, const Vector& values) {
    const Matrix q = action_values(mdp, reward, values);
    std::vector<int> actions(static_cast<std::size_t>(mdp.n_states()), 0);
    for (int s = 0; s < mdp.n_states(); ++s) {
        double best = q(s, 0);
        for (int a = 1; a < mdp.n_actions(); ++a) {
            if (q(s, a) > best) {
                best = q(s, a);
                actions[static_cast<std::size_t>(s)] = a;
            }
        }
    }
    return actions;
}

PlanResult value_iteration_plan(const TabularMDP& mdp, const Vector& reward, double eps1) {
    if (!(eps1 > 0.0)) throw std::invalid_argument("eps1 must be positive");
    if (reward.size() != mdp.n_states()) throw std::invalid_argument("reward length does not match the MDP");
    if (!reward.allFinite()) throw std::invalid_argument("reward contains non-finite entries");

    const double gamma = mdp.gamma();
    Vector values = Vector::Zero(mdp.n_states());
    int iterations = 0;
    if (gamma > 0.0) {
        const double threshold = eps1 * (1.0 - gamma) * (1.0 - gamma) / (2.0 * gamma);
        constexpr double kEpsilon = std::numeric_limits<double>::epsilon();
        for (;;) {
            const Vector next = action_values(mdp, reward, values).rowwise().maxCoeff();
            const double change = (next - values).lpNorm<Eigen::Infinity>();
            values = next;
            ++iterations;
            // Below a few ulps of |V| the backup no longer contracts in floating point.
            const double floor = 8.0 * kEpsilon * values.lpNorm<Eigen::Infinity>();
            if (change <= threshold || change <= floor) break;
        }
    }
    const std::vector<int> actions = greedy_actions(mdp, reward, values);
    StationaryPolicy policy = StationaryPolicy::deterministic(actions, mdp.n_actions());
    const double value = policy_value(mdp, policy, reward);
    return PlanResult{std::move(policy), value, iterations};
}

StateDistribution exact_density(const TabularMDP& mdp, const StationaryPolicy& policy) {
    return discounted_occupancy(mdp, policy);
}

StateDistribution exact_density(const TabularMDP& mdp, const MixturePolicy& mixture) {
    return mixture_occupancy(mdp, mixture);
}

} // namespace maxent
