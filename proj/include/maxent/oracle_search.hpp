#pragma once

#include "maxent/mdp.hpp"
#include "maxent/objectives.hpp"

#include <cstdint>
#include <stdexcept>

namespace maxent {

/// The search would exceed its size limits.
class SearchTooLarge : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct GridSearchLimits {
    int max_states = 6;
    int max_actions = 3;
    std::int64_t max_evaluations = 5'000'000;
};

struct GridSearchResult {
    double best_value;              ///< max of the functional over the grid
    StationaryPolicy best_policy;
    Vector best_density;
    double best_raw_entropy;        ///< max of Shannon entropy over the same grid
    StationaryPolicy entropy_policy;
    std::int64_t evaluated;
};

/// Number of policies the search visits at this resolution.
std::int64_t grid_search_size(const TabularMDP& mdp, double resolution);

/**
 * Brute-force maximization over stationary policies whose action
 * probabilities are multiples of the resolution.
 *
 * States whose actions all lead to the same distribution, and states
 * unreachable from d0, do not affect the occupancy and get a single
 * (uniform) choice. Ties keep the first policy in enumeration order.
 */
GridSearchResult grid_search_oracle(const TabularMDP& mdp, const RewardFunctional& functional, double resolution,
                                    const GridSearchLimits& limits = {});

} // namespace maxent
