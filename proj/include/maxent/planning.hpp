#pragma once

#include "maxent/mdp.hpp"

#include <vector>

namespace maxent {

struct PlanResult {
    StationaryPolicy policy;
    double value = 0.0; ///< `<d_pi, r>` of the returned policy, evaluated exactly
    int iterations = 0;
};

/**
 * Known-model planning oracle.
 *
 * Runs unnormalized Bellman backups `V <- r + gamma max_a P_a^T V` until the
 * sup-norm change drops below `eps1 (1-gamma)^2 / (2 gamma)` and returns the
 * deterministic greedy policy, whose normalized value is within `eps1` of the
 * optimum. Ties go to the lowest action index.
 */
PlanResult value_iteration_plan(const TabularMDP& mdp, const Vector& reward, double eps1);

/// Greedy actions for an unnormalized value function; lowest index wins ties.
std::vector<int> greedy_actions(const TabularMDP& mdp, const Vector& reward, const Vector& values);

/// Exact density oracle: the discounted occupancy, with zero estimation error.
StateDistribution exact_density(const TabularMDP& mdp, const StationaryPolicy& policy);
StateDistribution exact_density(const TabularMDP& mdp, const MixturePolicy& mixture);

} // namespace maxent
