#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's occupancy, planning or sampling code.

#include "maxent/mdp.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace support {

using maxent::Matrix;
using maxent::StationaryPolicy;
using maxent::TabularMDP;
using maxent::Vector;

inline Vector random_distribution(std::mt19937_64& rng, int n, bool allow_zeros = false) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vector p(n);
    for (int i = 0; i < n; ++i) p[i] = u(rng);
    if (allow_zeros) {
        for (int i = 0; i < n; ++i) {
            if (u(rng) < 0.3) p[i] = 0.0;
        }
        if (p.sum() == 0.0) p[std::uniform_int_distribution<int>(0, n - 1)(rng)] = 1.0;
    }
    return p / p.sum();
}

/// Random MDP with every transition row drawn uniformly then normalized.
inline TabularMDP random_mdp(std::uint64_t seed, int n, int k, double gamma, bool sparse = false) {
    std::mt19937_64 rng(seed * 7919 + 17);
    std::vector<Matrix> transitions(static_cast<std::size_t>(k), Matrix::Zero(n, n));
    for (int a = 0; a < k; ++a) {
        for (int s = 0; s < n; ++s) transitions[a].col(s) = random_distribution(rng, n, sparse);
    }
    return TabularMDP(std::move(transitions), gamma, random_distribution(rng, n, sparse));
}

inline StationaryPolicy random_policy(std::mt19937_64& rng, int n, int k) {
    Matrix p(n, k);
    for (int s = 0; s < n; ++s) p.row(s) = random_distribution(rng, k).transpose();
    return StationaryPolicy(p);
}

/// P_pi built entry by entry.
inline Matrix policy_matrix(const TabularMDP& mdp, const StationaryPolicy& pi) {
    const int n = mdp.n_states();
    Matrix p = Matrix::Zero(n, n);
    for (int s = 0; s < n; ++s) {
        for (int a = 0; a < mdp.n_actions(); ++a) {
            for (int next = 0; next < n; ++next) p(next, s) += pi(s, a) * mdp.prob(next, s, a);
        }
    }
    return p;
}

/// (1 - gamma) sum_{t <= t0} gamma^t P_pi^t d0, by repeated propagation.
inline Vector truncated_occupancy(const TabularMDP& mdp, const StationaryPolicy& pi, int t0) {
    const Matrix p = policy_matrix(mdp, pi);
    Vector dt = mdp.d0();
    Vector sum = Vector::Zero(mdp.n_states());
    double weight = 1.0 - mdp.gamma();
    for (int t = 0; t <= t0; ++t) {
        sum += weight * dt;
        dt = p * dt;
        weight *= mdp.gamma();
    }
    return sum;
}

/// Normalized value of a policy from the Bellman equation V = r + gamma P_pi^T V.
inline double bellman_value(const TabularMDP& mdp, const StationaryPolicy& pi, const Vector& r) {
    const int n = mdp.n_states();
    const Matrix system = Matrix::Identity(n, n) - mdp.gamma() * policy_matrix(mdp, pi).transpose();
    const Vector v = system.fullPivLu().solve(r);
    return (1.0 - mdp.gamma()) * mdp.d0().dot(v);
}

inline StationaryPolicy deterministic(const std::vector<int>& actions, int k) {
    Matrix p = Matrix::Zero(static_cast<Eigen::Index>(actions.size()), k);
    for (std::size_t s = 0; s < actions.size(); ++s) p(static_cast<Eigen::Index>(s), actions[s]) = 1.0;
    return StationaryPolicy(p);
}

/// Calls f for each of the k^n deterministic policies.
inline void for_each_deterministic(int n, int k, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> actions(static_cast<std::size_t>(n), 0);
    while (true) {
        f(actions);
        int s = 0;
        for (; s < n; ++s) {
            if (++actions[static_cast<std::size_t>(s)] < k) break;
            actions[static_cast<std::size_t>(s)] = 0;
        }
        if (s == n) return;
    }
}

/// Best normalized value over all deterministic stationary policies.
inline double best_deterministic_value(const TabularMDP& mdp, const Vector& r) {
    double best = -INFINITY;
    for_each_deterministic(mdp.n_states(), mdp.n_actions(), [&](const std::vector<int>& actions) {
        best = std::max(best, bellman_value(mdp, deterministic(actions, mdp.n_actions()), r));
    });
    return best;
}

inline double entropy(const Vector& d) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (d[i] > 0.0) h -= d[i] * std::log(d[i]);
    }
    return h;
}

/// Two states, one action that swaps them; starts in state 0.
inline TabularMDP swap_mdp(double gamma) {
    Matrix p(2, 2);
    p << 0, 1, 1, 0;
    return TabularMDP({p}, gamma, Vector::Unit(2, 0));
}

/// State A (0) and B (1); action 1 at A goes to B, action 0 stays; B absorbs.
inline TabularMDP go_stay_mdp(double gamma) {
    Matrix stay(2, 2), go(2, 2);
    stay << 1, 0, 0, 1;
    go << 0, 0, 1, 1;
    return TabularMDP({stay, go}, gamma, Vector::Unit(2, 0));
}

/// Deterministic chain: action 0 left, action 1 right, clamped at the ends, starts at 0.
inline TabularMDP deterministic_chain(int n, double gamma) {
    Matrix left = Matrix::Zero(n, n), right = Matrix::Zero(n, n);
    for (int s = 0; s < n; ++s) {
        left(std::max(s - 1, 0), s) = 1.0;
        right(std::min(s + 1, n - 1), s) = 1.0;
    }
    return TabularMDP({left, right}, gamma, Vector::Unit(n, 0));
}

} // namespace support
