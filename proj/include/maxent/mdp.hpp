#pragma once

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <vector>

namespace maxent {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Absolute tolerance for probability vectors supplied by the caller.
inline constexpr double kInputTolerance = 1e-12;
/// Absolute tolerance for probability vectors produced by a computation.
inline constexpr double kComputedTolerance = 1e-9;

/**
 * Finite discounted MDP without a reward.
 *
 * Transitions are stored per action as column-stochastic matrices:
 * `action_matrix(a)(s_next, s) = P(s_next | s, a)`. Rewards are passed to the
 * operations that need them as state-indexed vectors.
 */
class TabularMDP {
public:
    TabularMDP(std::vector<Matrix> transitions, double gamma, Vector d0);

    int n_states() const { return static_cast<int>(d0_.size()); }
    int n_actions() const { return static_cast<int>(transitions_.size()); }
    double gamma() const { return gamma_; }
    const Vector& d0() const { return d0_; }

    double prob(int s_next, int s, int a) const { return transitions_[a](s_next, s); }
    const Matrix& action_matrix(int a) const { return transitions_[a]; }

    TabularMDP with_gamma(double gamma) const;
    TabularMDP with_d0(Vector d0) const;

private:
    std::vector<Matrix> transitions_;
    double gamma_;
    Vector d0_;
};

/// Row-stochastic matrix `probs(s, a) = pi(a | s)`.
class StationaryPolicy {
public:
    explicit StationaryPolicy(Matrix probs);

    static StationaryPolicy uniform(int n_states, int n_actions);
    static StationaryPolicy deterministic(std::span<const int> actions, int n_actions);

    int n_states() const { return static_cast<int>(probs_.rows()); }
    int n_actions() const { return static_cast<int>(probs_.cols()); }
    const Matrix& probs() const { return probs_; }
    double operator()(int s, int a) const { return probs_(s, a); }

    bool operator==(const StationaryPolicy& other) const { return probs_ == other.probs_; }

private:
    Matrix probs_;
};

/**
 * Distribution over stationary policies. One component is drawn at the start
 * of an episode and followed for the rest of it.
 */
class MixturePolicy {
public:
    explicit MixturePolicy(StationaryPolicy initial);
    MixturePolicy(std::vector<StationaryPolicy> components, std::vector<double> weights);

    std::size_t size() const { return weights_.size(); }
    const StationaryPolicy& component(std::size_t i) const { return *components_[i]; }
    const std::vector<double>& weights() const { return weights_; }
    int n_states() const { return component(0).n_states(); }
    int n_actions() const { return component(0).n_actions(); }

    /// Frank-Wolfe update: weights become ((1 - eta) * w, eta) with `policy` appended.
    MixturePolicy mixed_in(StationaryPolicy policy, double eta) const;

private:
    MixturePolicy() = default;

    std::vector<std::shared_ptr<const StationaryPolicy>> components_;
    std::vector<double> weights_;
};

class StateDistribution {
public:
    explicit StateDistribution(Vector probs, double tolerance = kComputedTolerance);

    static StateDistribution uniform(int n_states);
    static StateDistribution point_mass(int n_states, int state);

    int size() const { return static_cast<int>(probs_.size()); }
    const Vector& probs() const { return probs_; }
    double operator[](int s) const { return probs_[s]; }

private:
    Vector probs_;
};

class StateActionOccupancy {
public:
    explicit StateActionOccupancy(Matrix probs, double tolerance = kComputedTolerance);

    int n_states() const { return static_cast<int>(probs_.rows()); }
    int n_actions() const { return static_cast<int>(probs_.cols()); }
    const Matrix& probs() const { return probs_; }
    Vector state_marginal() const { return probs_.rowwise().sum(); }

private:
    Matrix probs_;
};

struct FlowCheck {
    Vector residual;
    bool feasible = false;
};

/// `P_pi(s_next, s) = sum_a pi(a|s) P(s_next|s,a)`; every column is a distribution.
Matrix transition_operator(const TabularMDP& mdp, const StationaryPolicy& policy);

/// Distribution of s_t, i.e. `P_pi^t d0`.
StateDistribution t_step_distribution(const TabularMDP& mdp, const StationaryPolicy& policy, int t);

/// `(1 - gamma) (I - gamma P_pi)^{-1} d0`, solved with a dense LU factorization.
StateDistribution discounted_occupancy(const TabularMDP& mdp, const StationaryPolicy& policy);

StateActionOccupancy discounted_occupancy_sa(const TabularMDP& mdp, const StationaryPolicy& policy);

StateDistribution mixture_occupancy(const TabularMDP& mdp, const MixturePolicy& mixture);

/// Conditional action distribution of an occupancy; rows with zero mass become uniform.
StationaryPolicy policy_from_occupancy(const StateActionOccupancy& occupancy);

/**
 * Residual of the discounted flow equation
 * `sum_a d(s,a) - (1-gamma) d0(s) - gamma sum_{s',a'} P(s|s',a') d(s',a')`
 * and whether its sup-norm is within `tolerance`.
 */
FlowCheck check_flow_constraints(const StateActionOccupancy& occupancy, const TabularMDP& mdp,
                                 double tolerance);

/// Normalized discounted value `<d_pi, r>` for a state reward.
double policy_value(const TabularMDP& mdp, const StationaryPolicy& policy, const Vector& reward);
double policy_value(const TabularMDP& mdp, const MixturePolicy& mixture, const Vector& reward);

} // namespace maxent
