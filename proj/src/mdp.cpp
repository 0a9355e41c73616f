#include "maxent/mdp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace maxent {

namespace {

std::string idx(int i) { return std::to_string(i); }

void check_distribution(const Vector& p, double tolerance, const std::string& what) {
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (!std::isfinite(p[i]) || p[i] < -tolerance) {
            throw std::invalid_argument(what + ": entry " + idx(static_cast<int>(i)) +
                                        " is negative or non-finite (" + std::to_string(p[i]) + ")");
        }
    }
    const double total = p.sum();
    if (std::abs(total - 1.0) > tolerance) {
        throw std::invalid_argument(what + ": sums to " + std::to_string(total) + ", expected 1");
    }
}

Vector clamp_negative_zero(Vector v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v[i] < 0.0) v[i] = 0.0;
    }
    return v;
}

void check_dimensions(const TabularMDP& mdp, const StationaryPolicy& policy) {
    if (policy.n_states() != mdp.n_states() || policy.n_actions() != mdp.n_actions()) {
        throw std::invalid_argument("policy is " + idx(policy.n_states()) + "x" + idx(policy.n_actions()) +
                                    " but the MDP has " + idx(mdp.n_states()) + " states and " +
                                    idx(mdp.n_actions()) + " actions");
    }
}

} // namespace

TabularMDP::TabularMDP(std::vector<Matrix> transitions, double gamma, Vector d0)
    : transitions_(std::move(transitions)), gamma_(gamma), d0_(std::move(d0)) {
    const int n = static_cast<int>(d0_.size());
    if (n < 1) throw std::invalid_argument("MDP needs at least one state");
    if (transitions_.empty()) throw std::invalid_argument("MDP needs at least one action");
    if (!(gamma_ >= 0.0 && gamma_ < 1.0)) {
        throw std::invalid_argument("gamma must lie in [0, 1), got " + std::to_string(gamma_));
    }
    check_distribution(d0_, kInputTolerance, "d0");
    for (int a = 0; a < n_actions(); ++a) {
        const Matrix& p = transitions_[a];
        if (p.rows() != n || p.cols() != n) {
            throw std::invalid_argument("transition matrix of action " + idx(a) + " is not " + idx(n) + "x" +
                                        idx(n));
        }
        for (int s = 0; s < n; ++s) {
            check_distribution(p.col(s), kInputTolerance,
                               "transition row (s=" + idx(s) + ", a=" + idx(a) + ")");
        }
    }
}

TabularMDP TabularMDP::with_gamma(double gamma) const { return TabularMDP(transitions_, gamma, d0_); }

TabularMDP TabularMDP::with_d0(Vector d0) const { return TabularMDP(transitions_, gamma_, std::move(d0)); }

StationaryPolicy::StationaryPolicy(Matrix probs) : probs_(std::move(probs)) {
    if (probs_.rows() < 1 || probs_.cols() < 1) throw std::invalid_argument("empty policy");
    for (int s = 0; s < n_states(); ++s) {
        check_distribution(probs_.row(s).transpose(), kInputTolerance, "policy row " + idx(s));
    }
}

StationaryPolicy StationaryPolicy::uniform(int n_states, int n_actions) {
    return StationaryPolicy(Matrix::Constant(n_states, n_actions, 1.0 / n_actions));
}

StationaryPolicy StationaryPolicy::deterministic(std::span<const int> actions, int n_actions) {
    Matrix probs = Matrix::Zero(static_cast<Eigen::Index>(actions.size()), n_actions);
    for (std::size_t s = 0; s < actions.size(); ++s) {
        if (actions[s] < 0 || actions[s] >= n_actions) {
            throw std::invalid_argument("action " + idx(actions[s]) + " out of range at state " +
                                        idx(static_cast<int>(s)));
        }
        probs(static_cast<Eigen::Index>(s), actions[s]) = 1.0;
    }
    return StationaryPolicy(std::move(probs));
}

MixturePolicy::MixturePolicy(StationaryPolicy initial) {
    components_.push_back(std::make_shared<const StationaryPolicy>(std::move(initial)));
    weights_.push_back(1.0);
}

MixturePolicy::MixturePolicy(std::vector<StationaryPolicy> components, std::vector<double> weights)
    : weights_(std::move(weights)) {
    if (components.empty() || components.size() != weights_.size()) {
        throw std::invalid_argument("mixture needs as many weights as components (at least one)");
    }
    const int n = components.front().n_states(), k = components.front().n_actions();
    for (auto& c : components) {
        if (c.n_states() != n || c.n_actions() != k) {
            throw std::invalid_argument("mixture components have different shapes");
        }
        components_.push_back(std::make_shared<const StationaryPolicy>(std::move(c)));
    }
    check_distribution(Eigen::Map<const Vector>(weights_.data(), static_cast<Eigen::Index>(weights_.size())),
                       kInputTolerance, "mixture weights");
}

MixturePolicy MixturePolicy::mixed_in(StationaryPolicy policy, double eta) const {
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("step size must lie in (0, 1]");
    if (policy.n_states() != n_states() || policy.n_actions() != n_actions()) {
        throw std::invalid_argument("mixed-in policy has a different shape");
    }
    MixturePolicy next;
    next.components_ = components_;
    next.components_.push_back(std::make_shared<const StationaryPolicy>(std::move(policy)));
    next.weights_.reserve(weights_.size() + 1);
    for (double w : weights_) next.weights_.push_back((1.0 - eta) * w);
    next.weights_.push_back(eta);
    return next;
}

StateDistribution::StateDistribution(Vector probs, double tolerance) : probs_(std::move(probs)) {
    if (probs_.size() < 1) throw std::invalid_argument("empty state distribution");
    check_distribution(probs_, tolerance, "state distribution");
}

StateDistribution StateDistribution::uniform(int n_states) {
    return StateDistribution(Vector::Constant(n_states, 1.0 / n_states));
}

StateDistribution StateDistribution::point_mass(int n_states, int state) {
    Vector p = Vector::Zero(n_states);
    p[state] = 1.0;
    return StateDistribution(std::move(p));
}

StateActionOccupancy::StateActionOccupancy(Matrix probs, double tolerance) : probs_(std::move(probs)) {
    if (probs_.size() < 1) throw std::invalid_argument("empty occupancy");
    check_distribution(Eigen::Map<const Vector>(probs_.data(), probs_.size()), tolerance, "occupancy");
}

Matrix transition_operator(const TabularMDP& mdp, const StationaryPolicy& policy) {
    check_dimensions(mdp, policy);
    const int n = mdp.n_states();
    Matrix op = Matrix::Zero(n, n);
    for (int a = 0; a < mdp.n_actions(); ++a) {
        op += mdp.action_matrix(a) * policy.probs().col(a).asDiagonal();
    }
    return op;
}

StateDistribution t_step_distribution(const TabularMDP& mdp, const StationaryPolicy& policy, int t) {
    if (t < 0) throw std::invalid_argument("t must be non-negative");
    const Matrix op = transition_operator(mdp, policy);
    Vector d = mdp.d0();
    for (int i = 0; i < t; ++i) d = op * d;
    return StateDistribution(std::move(d));
}

StateDistribution discounted_occupancy(const TabularMDP& mdp, const StationaryPolicy& policy) {
    const int n = mdp.n_states();
    const Matrix op = transition_operator(mdp, policy);
    const Matrix system = Matrix::Identity(n, n) - mdp.gamma() * op;
    Vector x = system.partialPivLu().solve(mdp.d0());
    if (!x.allFinite()) throw std::logic_error("occupancy solve produced non-finite values");
    return StateDistribution(clamp_negative_zero((1.0 - mdp.gamma()) * x));
}

StateActionOccupancy discounted_occupancy_sa(const TabularMDP& mdp, const StationaryPolicy& policy) {
    const Vector d = discounted_occupancy(mdp, policy).probs();
    return StateActionOccupancy(d.asDiagonal() * policy.probs());
}

StateDistribution mixture_occupancy(const TabularMDP& mdp, const MixturePolicy& mixture) {
    Vector d = Vector::Zero(mdp.n_states());
    for (std::size_t i = 0; i < mixture.size(); ++i) {
        if (mixture.weights()[i] == 0.0) continue;
        d += mixture.weights()[i] * discounted_occupancy(mdp, mixture.component(i)).probs();
    }
    return StateDistribution(std::move(d));
}

StationaryPolicy policy_from_occupancy(const StateActionOccupancy& occupancy) {
    const Vector marginal = occupancy.state_marginal();
    Matrix probs(occupancy.n_states(), occupancy.n_actions());
    for (int s = 0; s < occupancy.n_states(); ++s) {
        if (marginal[s] > 0.0) {
            probs.row(s) = occupancy.probs().row(s) / marginal[s];
        } else {
            probs.row(s).setConstant(1.0 / occupancy.n_actions());
        }
    }
    return StationaryPolicy(std::move(probs));
}

FlowCheck check_flow_constraints(const StateActionOccupancy& occupancy, const TabularMDP& mdp, double tolerance) {
    if (occupancy.n_states() != mdp.n_states() || occupancy.n_actions() != mdp.n_actions()) {
        throw std::invalid_argument("occupancy shape does not match the MDP");
    }
    Vector inflow = Vector::Zero(mdp.n_states());
    for (int a = 0; a < mdp.n_actions(); ++a) {
        inflow += mdp.action_matrix(a) * occupancy.probs().col(a);
    }
    FlowCheck check;
    check.residual = occupancy.state_marginal() - (1.0 - mdp.gamma()) * mdp.d0() - mdp.gamma() * inflow;
    check.feasible = check.residual.lpNorm<Eigen::Infinity>() <= tolerance;
    return check;
}

double policy_value(const TabularMDP& mdp, const StationaryPolicy& policy, const Vector& reward) {
    if (reward.size() != mdp.n_states()) throw std::invalid_argument("reward length does not match the MDP");
    return discounted_occupancy(mdp, policy).probs().dot(reward);
}

double policy_value(const TabularMDP& mdp, const MixturePolicy& mixture, const Vector& reward) {
    if (reward.size() != mdp.n_states()) throw std::invalid_argument("reward length does not match the MDP");
    return mixture_occupancy(mdp, mixture).probs().dot(reward);
}

} // namespace maxent
