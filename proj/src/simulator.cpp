#include "maxent/simulator.hpp"

#include <stdexcept>

namespace maxent {

namespace {

std::vector<std::pair<int, double>> cumulative_support(const Vector& p) {
    std::vector<std::pair<int, double>> support;
    double total = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) {
            total += p[i];
            support.emplace_back(static_cast<int>(i), total);
        }
    }
    return support;
}

} // namespace

EpisodicSimulator::EpisodicSimulator(const TabularMDP& mdp, std::uint64_t seed)
    : n_states_(mdp.n_states()),
      n_actions_(mdp.n_actions()),
      gamma_(mdp.gamma()),
      seed_(seed),
      uniform_(seed),
      initial_(cumulative_support(mdp.d0())) {
    successors_.reserve(static_cast<std::size_t>(n_states_) * n_actions_);
    for (int s = 0; s < n_states_; ++s) {
        for (int a = 0; a < n_actions_; ++a) {
            successors_.push_back(cumulative_support(mdp.action_matrix(a).col(s)));
        }
    }
}

std::uint64_t EpisodicSimulator::reserve_episodes(std::uint64_t count) {
    const std::uint64_t first = next_episode_;
    next_episode_ += count;
    return first;
}

int EpisodicSimulator::draw(const Support& support, double u) {
    // Scale by the accumulated mass so rounding in the cumulative sum never strands u.
    const double target = u * support.back().second;
    for (const auto& [state, cumulative] : support) {
        if (target < cumulative) return state;
    }
    return support.back().first;
}

Episode::Episode(const EpisodicSimulator& sim, std::uint64_t id) : sim_(&sim), id_(id) {
    state_ = EpisodicSimulator::draw(sim.initial_, sim.uniform_(id, 0, Stream::Environment));
}

int Episode::step(int action) {
    if (action < 0 || action >= sim_->n_actions_) throw std::out_of_range("action out of range");
    const auto& support = sim_->successors_[static_cast<std::size_t>(state_) * sim_->n_actions_ + action];
    ++step_;
    state_ = EpisodicSimulator::draw(support, sim_->uniform_(id_, step_, Stream::Environment));
    return state_;
}

} // namespace maxent
