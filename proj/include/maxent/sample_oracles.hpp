#pragma once

#include "maxent/mdp.hpp"
#include "maxent/simulator.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace maxent {

/// Visit counts C(s'|s,a), kept across planner invocations. Counts only grow.
class TransitionCounts {
public:
    TransitionCounts(int n_states, int n_actions);

    int n_states() const { return n_states_; }
    int n_actions() const { return n_actions_; }

    void record(int s, int a, int s_next, std::uint64_t times = 1);
    std::uint64_t count(int s_next, int s, int a) const { return counts_[index(s, a) * n_states_ + s_next]; }
    /// sum over s' of C(s'|s,a)
    std::uint64_t visits(int s, int a) const { return visits_[index(s, a)]; }
    std::uint64_t total() const { return total_; }

    bool operator==(const TransitionCounts& other) const = default;

private:
    std::size_t index(int s, int a) const { return static_cast<std::size_t>(s) * n_actions_ + a; }

    int n_states_;
    int n_actions_;
    std::vector<std::uint64_t> counts_;
    std::vector<std::uint64_t> visits_;
    std::uint64_t total_ = 0;
};

/// States whose every action has been tried at least `threshold` times.
class KnownSet {
public:
    KnownSet(const TransitionCounts& counts, std::uint64_t threshold);
    explicit KnownSet(std::vector<bool> members);

    bool contains(int s) const { return members_[static_cast<std::size_t>(s)]; }
    int size() const;
    int n_states() const { return static_cast<int>(members_.size()); }
    const std::vector<bool>& members() const { return members_; }

private:
    std::vector<bool> members_;
};

/// Unknown states absorbing, with the optimistic reward `bonus` there.
struct InducedModel {
    TabularMDP model;
    Vector reward;
};

/// Induced model built from the true transitions (used for analysis and tests).
InducedModel induced_model(const TabularMDP& truth, const KnownSet& known, const Vector& reward, double bonus);

/// Induced model built from empirical counts; the agent does not know d0, so it is taken as uniform.
InducedModel empirical_induced_model(const TransitionCounts& counts, const KnownSet& known, const Vector& reward,
                                     double bonus, double gamma);

struct Trajectory {
    std::uint64_t episode = 0;
    std::vector<int> states;  ///< steps + 1 entries
    std::vector<int> actions; ///< steps entries
};

Trajectory rollout(const EpisodicSimulator& sim, const StationaryPolicy& policy, std::uint64_t episode, int steps);
Trajectory rollout(const EpisodicSimulator& sim, const MixturePolicy& mixture, std::uint64_t episode, int steps);

struct SamplePlanParams {
    double eps = 0.1;
    double delta = 0.1;
    double bonus = 1.0; ///< B: reward bound and optimistic reward on unknown states
    std::optional<std::uint64_t> m;
    std::optional<int> n;
    std::optional<int> t0;
    std::optional<double> eps1;
    /// Sees every certification rollout after its counts were recorded.
    std::function<void(const Trajectory&)> on_trajectory;
};

struct SamplePlanSettings {
    double eps1;
    std::uint64_t m;
    int n;
    int t0;
};

/// Defaults for the sample-based planner, with any overrides from `params` applied.
SamplePlanSettings sample_plan_settings(const SamplePlanParams& params, int n_states, int n_actions, double gamma);

struct SamplePlanResult {
    StationaryPolicy policy;
    int inner_iterations = 0;
    int exploration_iterations = 0; ///< inner iterations that ended without certifying stability
    std::vector<std::vector<bool>> known_history; ///< known set at the start of each inner iteration
    SamplePlanSettings settings;
};

/**
 * E3-style planner on an unknown MDP.
 *
 * Repeats: plan on the empirical induced model, send unknown states to their
 * least-tried action, run n rollouts of length t0 and record their
 * transitions. Returns once a whole batch of rollouts stays inside the known
 * set. `counts` persists between calls.
 */
SamplePlanResult sample_plan(EpisodicSimulator& sim, TransitionCounts& counts, const Vector& reward,
                             const SamplePlanParams& params);

struct DensityParams {
    double eps0 = 0.1;
    double delta = 0.1;
    std::optional<std::uint64_t> m;
    std::optional<int> t0;
};

struct DensitySettings {
    std::uint64_t m;
    int t0;
};

DensitySettings density_settings(const DensityParams& params, int n_states, double gamma);

/// Discount-weighted empirical state distribution of m rollouts of length t0.
StateDistribution estimate_density(EpisodicSimulator& sim, const StationaryPolicy& policy,
                                   const DensityParams& params);
StateDistribution estimate_density(EpisodicSimulator& sim, const MixturePolicy& mixture,
                                   const DensityParams& params);

/// Fraction of n fresh rollouts that visit a state outside `known` among their first t0 states.
double escape_frequency(EpisodicSimulator& sim, const StationaryPolicy& policy, const KnownSet& known, int n,
                        int t0);

} // namespace maxent
