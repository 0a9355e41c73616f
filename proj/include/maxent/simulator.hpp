#pragma once

#include "maxent/mdp.hpp"
#include "maxent/random.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace maxent {

class EpisodicSimulator;

/// One reset-to-d0 episode. Draws are keyed by (seed, episode id, step).
class Episode {
public:
    int state() const { return state_; }
    std::uint32_t steps_taken() const { return step_; }
    std::uint64_t id() const { return id_; }

    /// Applies `action` and returns the successor state.
    int step(int action);

private:
    friend class EpisodicSimulator;
    Episode(const EpisodicSimulator& sim, std::uint64_t id);

    const EpisodicSimulator* sim_;
    std::uint64_t id_;
    std::uint32_t step_ = 0;
    int state_ = 0;
};

/**
 * Black-box access to an MDP: reset to s0 ~ d0 and step s' ~ P(.|s,a).
 *
 * The transition model is private; sample-based code only sees the sizes and
 * the discount. Episodes are addressed by id, so a trajectory depends only on
 * (seed, id, actions) and can be regenerated in any order.
 */
class EpisodicSimulator {
public:
    EpisodicSimulator(const TabularMDP& mdp, std::uint64_t seed);

    int n_states() const { return n_states_; }
    int n_actions() const { return n_actions_; }
    double gamma() const { return gamma_; }
    std::uint64_t seed() const { return seed_; }

    /// Hands out `count` consecutive unused episode ids and returns the first.
    std::uint64_t reserve_episodes(std::uint64_t count);
    std::uint64_t episodes_used() const { return next_episode_; }

    Episode start(std::uint64_t episode_id) const { return Episode(*this, episode_id); }

private:
    friend class Episode;
    using Support = std::vector<std::pair<int, double>>; // (state, cumulative probability)

    static int draw(const Support& support, double u);

    int n_states_;
    int n_actions_;
    double gamma_;
    std::uint64_t seed_;
    KeyedUniform uniform_;
    Support initial_;
    std::vector<Support> successors_; // indexed by s * n_actions + a
    std::uint64_t next_episode_ = 0;
};

inline EpisodicSimulator make_simulator(const TabularMDP& mdp, std::uint64_t seed) {
    return EpisodicSimulator(mdp, seed);
}

} // namespace maxent
