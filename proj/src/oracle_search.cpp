#include "maxent/oracle_search.hpp"

#include "maxent/envs.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace maxent {

namespace {

bool actions_identical(const TabularMDP& mdp, int s) {
    for (int a = 1; a < mdp.n_actions(); ++a) {
        for (int next = 0; next < mdp.n_states(); ++next) {
            if (mdp.prob(next, s, a) != mdp.prob(next, s, 0)) return false;
        }
    }
    return true;
}

/// All action distributions with coordinates in multiples of 1/steps.
std::vector<std::vector<double>> simplex_grid(int n_actions, int steps) {
    std::vector<std::vector<double>> points;
    std::vector<int> counts(static_cast<std::size_t>(n_actions), 0);
    auto recurse = [&](auto&& self, int a, int left) -> void {
        if (a == n_actions - 1) {
            counts[static_cast<std::size_t>(a)] = left;
            std::vector<double> p(counts.size());
            for (std::size_t i = 0; i < counts.size(); ++i) p[i] = static_cast<double>(counts[i]) / steps;
            points.push_back(std::move(p));
            return;
        }
        for (int c = left; c >= 0; --c) {
            counts[static_cast<std::size_t>(a)] = c;
            self(self, a + 1, left - c);
        }
    };
    recurse(recurse, 0, steps);
    return points;
}

int steps_for(double resolution) {
    if (!(resolution > 0.0 && resolution <= 1.0)) throw std::invalid_argument("resolution must lie in (0, 1]");
    const long steps = std::lround(1.0 / resolution);
    if (std::abs(steps * resolution - 1.0) > 1e-9) throw std::invalid_argument("resolution must be 1/k for an integer k");
    return static_cast<int>(steps);
}

std::vector<bool> free_states(const TabularMDP& mdp) {
    const auto reachable = reachable_states(mdp);
    std::vector<bool> free(static_cast<std::size_t>(mdp.n_states()));
    for (int s = 0; s < mdp.n_states(); ++s) {
        free[static_cast<std::size_t>(s)] = reachable[static_cast<std::size_t>(s)] && !actions_identical(mdp, s);
    }
    return free;
}

std::int64_t binomial(int n, int k) {
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace

std::int64_t grid_search_size(const TabularMDP& mdp, double resolution) {
    const int steps = steps_for(resolution);
    const std::int64_t per_state = binomial(steps + mdp.n_actions() - 1, mdp.n_actions() - 1);
    std::int64_t total = 1;
    for (bool f : free_states(mdp)) {
        if (!f) continue;
        if (total > std::numeric_limits<std::int64_t>::max() / per_state) return std::numeric_limits<std::int64_t>::max();
        total *= per_state;
    }
    return total;
}

GridSearchResult grid_search_oracle(const TabularMDP& mdp, const RewardFunctional& functional, double resolution,
                                    const GridSearchLimits& limits) {
    const int n = mdp.n_states();
    const int k = mdp.n_actions();
    if (n > limits.max_states || k > limits.max_actions) {
        throw SearchTooLarge("grid search supports at most " + std::to_string(limits.max_states) + " states and " +
                             std::to_string(limits.max_actions) + " actions, environment has " + std::to_string(n) +
                             " states and " + std::to_string(k) + " actions");
    }
    const std::int64_t size = grid_search_size(mdp, resolution);
    if (size > limits.max_evaluations) {
        throw SearchTooLarge("grid search would evaluate " + std::to_string(size) + " policies, limit is " +
                             std::to_string(limits.max_evaluations));
    }

    const auto grid = simplex_grid(k, steps_for(resolution));
    const auto free = free_states(mdp);
    std::vector<int> varying;
    Matrix probs = Matrix::Constant(n, k, 1.0 / k);
    for (int s = 0; s < n; ++s) {
        if (free[static_cast<std::size_t>(s)]) varying.push_back(s);
    }
    std::vector<std::size_t> index(varying.size(), 0);
    auto assign = [&](std::size_t i) {
        const auto& p = grid[index[i]];
        for (int a = 0; a < k; ++a) probs(varying[i], a) = p[static_cast<std::size_t>(a)];
    };
    for (std::size_t i = 0; i < varying.size(); ++i) assign(i);

    // Build P_pi in place and solve directly rather than through StationaryPolicy per point.
    const double gamma = mdp.gamma();
    const Vector rhs = (1.0 - gamma) * mdp.d0();
    double best_value = -std::numeric_limits<double>::infinity();
    double best_entropy = -std::numeric_limits<double>::infinity();
    Matrix best_probs = probs, entropy_probs = probs;
    Vector best_density;
    std::int64_t evaluated = 0;
    Matrix system(n, n);
    while (true) {
        system.setIdentity();
        for (int a = 0; a < k; ++a) {
            system.noalias() -= gamma * (mdp.action_matrix(a) * probs.col(a).asDiagonal());
        }
        Vector d = system.partialPivLu().solve(rhs);
        d = d.cwiseMax(0.0);
        ++evaluated;
        const double v = functional.value(d);
        if (v > best_value) {
            best_value = v;
            best_probs = probs;
            best_density = d;
        }
        const double h = raw_entropy(d);
        if (h > best_entropy) {
            best_entropy = h;
            entropy_probs = probs;
        }

        std::size_t i = 0;
        for (; i < varying.size(); ++i) {
            if (++index[i] < grid.size()) {
                assign(i);
                break;
            }
            index[i] = 0;
            assign(i);
        }
        if (i == varying.size()) break;
    }
    return GridSearchResult{best_value,  StationaryPolicy(best_probs),    std::move(best_density),
                            best_entropy, StationaryPolicy(entropy_probs), evaluated};
}

} // namespace maxent
