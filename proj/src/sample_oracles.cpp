#include "maxent/sample_oracles.hpp"

#include "maxent/planning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace maxent {

namespace {

int sample_index(const double* probs, int size, std::ptrdiff_t stride, double u) {
    double cumulative = 0.0;
    int last_positive = 0;
    for (int i = 0; i < size; ++i) {
        const double p = probs[i * stride];
        if (p <= 0.0) continue;
        cumulative += p;
        last_positive = i;
        if (u < cumulative) return i;
    }
    return last_positive;
}

int sample_action(const StationaryPolicy& policy, int state, double u) {
    const Matrix& probs = policy.probs();
    return sample_index(&probs(state, 0), policy.n_actions(), probs.outerStride(), u);
}

Trajectory rollout_with(const EpisodicSimulator& sim, const StationaryPolicy& policy, std::uint64_t episode,
                        int steps) {
    if (policy.n_states() != sim.n_states() || policy.n_actions() != sim.n_actions()) {
        throw std::invalid_argument("policy shape does not match the simulator");
    }
    const KeyedUniform uniform(sim.seed());
    Trajectory traj;
    traj.episode = episode;
    traj.states.reserve(static_cast<std::size_t>(steps) + 1);
    traj.actions.reserve(static_cast<std::size_t>(steps));
    Episode ep = sim.start(episode);
    traj.states.push_back(ep.state());
    for (int t = 0; t < steps; ++t) {
        const int a = sample_action(policy, ep.state(), uniform(episode, static_cast<std::uint32_t>(t), Stream::Action));
        traj.actions.push_back(a);
        traj.states.push_back(ep.step(a));
    }
    return traj;
}

const StationaryPolicy& draw_component(const EpisodicSimulator& sim, const MixturePolicy& mixture,
                                       std::uint64_t episode) {
    const KeyedUniform uniform(sim.seed());
    const auto& w = mixture.weights();
    const int i = sample_index(w.data(), static_cast<int>(w.size()), 1, uniform(episode, 0, Stream::Component));
    return mixture.component(static_cast<std::size_t>(i));
}

int horizon_for(double tolerance, double gamma) {
    if (gamma <= 0.0) return 1;
    return std::max(1, static_cast<int>(std::ceil(std::log(0.1 * tolerance) / std::log(gamma))));
}

template <typename PolicyFor>
StateDistribution estimate_density_with(EpisodicSimulator& sim, const DensityParams& params, PolicyFor policy_for) {
    const DensitySettings settings = density_settings(params, sim.n_states(), sim.gamma());
    const int n = sim.n_states();
    const int t0 = settings.t0;
    // Integer visit counts per (t, s) keep the estimate independent of rollout order.
    std::vector<std::uint64_t> visits(static_cast<std::size_t>(t0) * n, 0);
    const std::uint64_t first = sim.reserve_episodes(settings.m);
    for (std::uint64_t i = 0; i < settings.m; ++i) {
        const std::uint64_t episode = first + i;
        const Trajectory traj = rollout_with(sim, policy_for(episode), episode, t0 - 1);
        for (int t = 0; t < t0; ++t) ++visits[static_cast<std::size_t>(t) * n + traj.states[t]];
    }
    const double gamma = sim.gamma();
    const double normalizer = (1.0 - gamma) / (1.0 - std::pow(gamma, t0));
    Vector d = Vector::Zero(n);
    double discount = 1.0;
    for (int t = 0; t < t0; ++t) {
        for (int s = 0; s < n; ++s) {
            d[s] += discount * static_cast<double>(visits[static_cast<std::size_t>(t) * n + s]);
        }
        discount *= gamma;
    }
    d *= normalizer / static_cast<double>(settings.m);
    return StateDistribution(std::move(d));
}

bool escapes(const Trajectory& traj, const KnownSet& known, int t0) {
    const int limit = std::min<int>(t0, static_cast<int>(traj.states.size()));
    for (int t = 0; t < limit; ++t) {
        if (!known.contains(traj.states[t])) return true;
    }
    return false;
}

} // namespace

TransitionCounts::TransitionCounts(int n_states, int n_actions)
    : n_states_(n_states),
      n_actions_(n_actions),
      counts_(static_cast<std::size_t>(n_states) * n_actions * n_states, 0),
      visits_(static_cast<std::size_t>(n_states) * n_actions, 0) {
    if (n_states < 1 || n_actions < 1) throw std::invalid_argument("counts need positive sizes");
}

void TransitionCounts::record(int s, int a, int s_next, std::uint64_t times) {
    if (s < 0 || s >= n_states_ || a < 0 || a >= n_actions_ || s_next < 0 || s_next >= n_states_) {
        throw std::out_of_range("transition (" + std::to_string(s) + ", " + std::to_string(a) + ", " +
                                std::to_string(s_next) + ") out of range");
    }
    counts_[index(s, a) * n_states_ + s_next] += times;
    visits_[index(s, a)] += times;
    total_ += times;
}

KnownSet::KnownSet(const TransitionCounts& counts, std::uint64_t threshold)
    : members_(static_cast<std::size_t>(counts.n_states()), false) {
    for (int s = 0; s < counts.n_states(); ++s) {
        bool known = true;
        for (int a = 0; a < counts.n_actions() && known; ++a) known = counts.visits(s, a) >= threshold;
        members_[static_cast<std::size_t>(s)] = known;
    }
}

KnownSet::KnownSet(std::vector<bool> members) : members_(std::move(members)) {}

int KnownSet::size() const { return static_cast<int>(std::count(members_.begin(), members_.end(), true)); }

InducedModel induced_model(const TabularMDP& truth, const KnownSet& known, const Vector& reward, double bonus) {
    const int n = truth.n_states();
    if (known.n_states() != n || reward.size() != n) throw std::invalid_argument("induced model size mismatch");
    std::vector<Matrix> transitions;
    for (int a = 0; a < truth.n_actions(); ++a) {
        Matrix p = truth.action_matrix(a);
        for (int s = 0; s < n; ++s) {
            if (!known.contains(s)) {
                p.col(s).setZero();
                p(s, s) = 1.0;
            }
        }
        transitions.push_back(std::move(p));
    }
    Vector r = reward;
    for (int s = 0; s < n; ++s) {
        if (!known.contains(s)) r[s] = bonus;
    }
    return InducedModel{TabularMDP(std::move(transitions), truth.gamma(), truth.d0()), std::move(r)};
}

InducedModel empirical_induced_model(const TransitionCounts& counts, const KnownSet& known, const Vector& reward,
                                     double bonus, double gamma) {
    const int n = counts.n_states();
    if (known.n_states() != n || reward.size() != n) throw std::invalid_argument("induced model size mismatch");
    std::vector<Matrix> transitions;
    for (int a = 0; a < counts.n_actions(); ++a) {
        Matrix p = Matrix::Zero(n, n);
        for (int s = 0; s < n; ++s) {
            const std::uint64_t total = counts.visits(s, a);
            if (known.contains(s) && total > 0) {
                for (int next = 0; next < n; ++next) {
                    p(next, s) = static_cast<double>(counts.count(next, s, a)) / static_cast<double>(total);
                }
            } else {
                p(s, s) = 1.0;
            }
        }
        transitions.push_back(std::move(p));
    }
    Vector r = reward;
    for (int s = 0; s < n; ++s) {
        if (!known.contains(s)) r[s] = bonus;
    }
    return InducedModel{TabularMDP(std::move(transitions), gamma, Vector::Constant(n, 1.0 / n)), std::move(r)};
}

Trajectory rollout(const EpisodicSimulator& sim, const StationaryPolicy& policy, std::uint64_t episode, int steps) {
    return rollout_with(sim, policy, episode, steps);
}

Trajectory rollout(const EpisodicSimulator& sim, const MixturePolicy& mixture, std::uint64_t episode, int steps) {
    return rollout_with(sim, draw_component(sim, mixture, episode), episode, steps);
}

SamplePlanSettings sample_plan_settings(const SamplePlanParams& params, int n_states, int n_actions, double gamma) {
    if (!(params.eps > 0.0 && params.eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
    if (!(params.delta > 0.0 && params.delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (!(params.bonus > 0.0)) throw std::invalid_argument("reward bound B must be positive");
    const double s = n_states;
    const double b = params.bonus;
    const double tenth = 0.1 * params.eps;
    const double union_log = std::log(2.0 * s / params.delta);
    const double scale = (1.0 - gamma) * (1.0 - gamma) * tenth * tenth;

    SamplePlanSettings out{};
    out.eps1 = params.eps1.value_or(0.1 * params.eps / b);
    out.m = params.m.value_or(static_cast<std::uint64_t>(std::ceil(32.0 * b * b * s * union_log / scale)));
    out.n = params.n.value_or(static_cast<int>(
        std::ceil(b * std::log(32.0 * s * s * n_actions * union_log / (scale * params.delta)) / tenth)));
    out.t0 = params.t0.value_or(horizon_for(params.eps, gamma));
    if (out.m < 1 || out.n < 1 || out.t0 < 1 || !(out.eps1 > 0.0)) {
        throw std::invalid_argument("sample planner needs m, n, t0 >= 1 and eps1 > 0");
    }
    return out;
}

SamplePlanResult sample_plan(EpisodicSimulator& sim, TransitionCounts& counts, const Vector& reward,
                             const SamplePlanParams& params) {
    const int n_states = sim.n_states();
    const int n_actions = sim.n_actions();
    if (counts.n_states() != n_states || counts.n_actions() != n_actions) {
        throw std::invalid_argument("counts shape does not match the simulator");
    }
    if (reward.size() != n_states) throw std::invalid_argument("reward length does not match the simulator");
    if (reward.lpNorm<Eigen::Infinity>() > params.bonus * (1.0 + 1e-12)) {
        throw std::invalid_argument("reward exceeds the bound B = " + std::to_string(params.bonus));
    }
    const SamplePlanSettings settings = sample_plan_settings(params, n_states, n_actions, sim.gamma());
    const std::uint64_t cap = 10 * settings.m * static_cast<std::uint64_t>(n_states) * n_actions;

    SamplePlanResult result{StationaryPolicy::uniform(n_states, n_actions), 0, 0, {}, settings};
    for (;;) {
        if (static_cast<std::uint64_t>(result.inner_iterations) >= cap) {
            throw std::runtime_error("sample planner exceeded " + std::to_string(cap) + " inner iterations");
        }
        const KnownSet known(counts, settings.m);
        result.known_history.push_back(known.members());

        const InducedModel induced = empirical_induced_model(counts, known, reward, params.bonus, sim.gamma());
        Matrix probs = value_iteration_plan(induced.model, induced.reward, settings.eps1).policy.probs();
        for (int s = 0; s < n_states; ++s) {
            if (known.contains(s)) continue;
            int least = 0;
            for (int a = 1; a < n_actions; ++a) {
                if (counts.visits(s, a) < counts.visits(s, least)) least = a;
            }
            probs.row(s).setZero();
            probs(s, least) = 1.0;
        }
        StationaryPolicy policy(std::move(probs));

        bool stable = true;
        const std::uint64_t first = sim.reserve_episodes(static_cast<std::uint64_t>(settings.n));
        for (int i = 0; i < settings.n; ++i) {
            const Trajectory traj = rollout_with(sim, policy, first + i, settings.t0);
            for (std::size_t t = 0; t < traj.actions.size(); ++t) {
                counts.record(traj.states[t], traj.actions[t], traj.states[t + 1]);
            }
            if (escapes(traj, known, settings.t0)) stable = false;
            if (params.on_trajectory) params.on_trajectory(traj);
        }
        ++result.inner_iterations;
        if (stable) {
            result.policy = std::move(policy);
            return result;
        }
        ++result.exploration_iterations;
    }
}

DensitySettings density_settings(const DensityParams& params, int n_states, double gamma) {
    if (!(params.eps0 > 0.0 && params.eps0 < 1.0)) throw std::invalid_argument("eps0 must lie in (0, 1)");
    if (!(params.delta > 0.0 && params.delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    DensitySettings out{};
    out.t0 = params.t0.value_or(horizon_for(params.eps0, gamma));
    const double eps0 = params.eps0;
    out.m = params.m.value_or(static_cast<std::uint64_t>(
        std::ceil(200.0 / (eps0 * eps0) * std::log(2.0 * n_states * out.t0 / params.delta))));
    if (out.m < 1 || out.t0 < 1) throw std::invalid_argument("density estimator needs m, t0 >= 1");
    return out;
}

StateDistribution estimate_density(EpisodicSimulator& sim, const StationaryPolicy& policy,
                                   const DensityParams& params) {
    return estimate_density_with(sim, params, [&](std::uint64_t) -> const StationaryPolicy& { return policy; });
}

StateDistribution estimate_density(EpisodicSimulator& sim, const MixturePolicy& mixture,
                                   const DensityParams& params) {
    return estimate_density_with(sim, params, [&](std::uint64_t episode) -> const StationaryPolicy& {
        return draw_component(sim, mixture, episode);
    });
}

double escape_frequency(EpisodicSimulator& sim, const StationaryPolicy& policy, const KnownSet& known, int n,
                        int t0) {
    if (n < 1 || t0 < 1) throw std::invalid_argument("escape_frequency needs n, t0 >= 1");
    if (known.n_states() != sim.n_states()) throw std::invalid_argument("known set size mismatch");
    const std::uint64_t first = sim.reserve_episodes(static_cast<std::uint64_t>(n));
    int escaped = 0;
    for (int i = 0; i < n; ++i) {
        if (escapes(rollout_with(sim, policy, first + i, t0 - 1), known, t0)) ++escaped;
    }
    return static_cast<double>(escaped) / n;
}

} // namespace maxent
