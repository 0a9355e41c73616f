#include "maxent/envs.hpp"

#include "maxent/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

namespace maxent {

namespace {

std::vector<Matrix> zero_transitions(int n_states, int n_actions) {
    return std::vector<Matrix>(static_cast<std::size_t>(n_actions), Matrix::Zero(n_states, n_states));
}

Vector initial_distribution(const EnvSpec& spec, int n_states, int default_start, const std::vector<bool>& blocked) {
    Vector d0 = Vector::Zero(n_states);
    switch (spec.d0.kind) {
    case InitialRule::Kind::Default: d0[default_start] = 1.0; break;
    case InitialRule::Kind::Uniform: {
        int open = 0;
        for (int s = 0; s < n_states; ++s) open += blocked.empty() || !blocked[s] ? 1 : 0;
        for (int s = 0; s < n_states; ++s) {
            if (blocked.empty() || !blocked[s]) d0[s] = 1.0 / open;
        }
        break;
    }
    case InitialRule::Kind::State:
        if (spec.d0.state < 0 || spec.d0.state >= n_states) {
            throw std::invalid_argument("d0 state " + std::to_string(spec.d0.state) + " out of range");
        }
        if (!blocked.empty() && blocked[spec.d0.state]) {
            throw std::invalid_argument("d0 state " + std::to_string(spec.d0.state) + " is a wall");
        }
        d0[spec.d0.state] = 1.0;
        break;
    }
    return d0;
}

TabularMDP build_figure1(const EnvSpec& spec, double gamma) {
    using namespace figure1;
    auto p = zero_transitions(6, 2);
    p[0](kLeft, kRoot) = 1.0;
    p[1](kRight, kRoot) = 1.0;
    p[0](kLeaf0, kLeft) = 1.0;
    p[1](kLeaf1, kLeft) = 1.0;
    p[0](kLeaf1, kRight) = 1.0;
    p[1](kLeaf2, kRight) = 1.0;
    for (int leaf : {kLeaf0, kLeaf1, kLeaf2}) {
        p[0](leaf, leaf) = 1.0;
        p[1](leaf, leaf) = 1.0;
    }
    return TabularMDP(std::move(p), gamma, initial_distribution(spec, 6, kRoot, {}));
}

TabularMDP build_chain(const EnvSpec& spec, double gamma) {
    const int n = spec.length;
    if (n < 1) throw std::invalid_argument("chain length must be positive");
    if (!(spec.slip >= 0.0 && spec.slip <= 1.0)) throw std::invalid_argument("slip must lie in [0, 1]");
    auto p = zero_transitions(n, 2);
    for (int s = 0; s < n; ++s) {
        const int left = std::max(0, s - 1);
        const int right = std::min(n - 1, s + 1);
        p[0](left, s) += 1.0 - spec.slip;
        p[0](right, s) += spec.slip;
        p[1](right, s) += 1.0 - spec.slip;
        p[1](left, s) += spec.slip;
    }
    return TabularMDP(std::move(p), gamma, initial_distribution(spec, n, 0, {}));
}

TabularMDP build_gridworld(const EnvSpec& spec, double gamma) {
    const int w = spec.width;
    const int h = spec.height;
    if (w < 1 || h < 1) throw std::invalid_argument("gridworld dimensions must be positive");
    if (!(spec.slip >= 0.0 && spec.slip <= 1.0)) throw std::invalid_argument("slip must lie in [0, 1]");
    const int n = w * h;
    auto index = [w](int x, int y) { return y * w + x; };
    std::vector<bool> blocked(static_cast<std::size_t>(n), false);
    for (const auto& cell : spec.walls) {
        if (cell.x < 0 || cell.x >= w || cell.y < 0 || cell.y >= h) {
            throw std::invalid_argument("wall (" + std::to_string(cell.x) + ", " + std::to_string(cell.y) +
                                        ") lies outside the grid");
        }
        blocked[index(cell.x, cell.y)] = true;
    }
    if (spec.start.x < 0 || spec.start.x >= w || spec.start.y < 0 || spec.start.y >= h) {
        throw std::invalid_argument("gridworld start lies outside the grid");
    }
    if (blocked[index(spec.start.x, spec.start.y)]) throw std::invalid_argument("a wall covers the start cell");

    // up, right, down, left
    constexpr int kDx[4] = {0, 1, 0, -1};
    constexpr int kDy[4] = {-1, 0, 1, 0};
    auto p = zero_transitions(n, 4);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int s = index(x, y);
            if (blocked[s]) {
                for (auto& m : p) m(s, s) = 1.0;
                continue;
            }
            auto target = [&](int dir) {
                const int nx = x + kDx[dir];
                const int ny = y + kDy[dir];
                if (nx < 0 || nx >= w || ny < 0 || ny >= h || blocked[index(nx, ny)]) return s;
                return index(nx, ny);
            };
            for (int a = 0; a < 4; ++a) {
                p[a](target(a), s) += 1.0 - spec.slip;
                for (int dir = 0; dir < 4; ++dir) p[a](target(dir), s) += spec.slip / 4.0;
            }
        }
    }
    return TabularMDP(std::move(p), gamma, initial_distribution(spec, n, index(spec.start.x, spec.start.y), blocked));
}

TabularMDP build_random(const EnvSpec& spec, double gamma) {
    const int n = spec.n_states;
    const int k = spec.n_actions;
    if (n < 1 || k < 1) throw std::invalid_argument("random MDP sizes must be positive");
    if (!(spec.dirichlet_alpha > 0.0)) throw std::invalid_argument("dirichlet_alpha must be positive");
    std::mt19937_64 rng(spec.seed);
    std::gamma_distribution<double> draw(spec.dirichlet_alpha, 1.0);
    auto p = zero_transitions(n, k);
    for (int s = 0; s < n; ++s) {
        for (int a = 0; a < k; ++a) {
            Vector col(n);
            for (int i = 0; i < n; ++i) col[i] = draw(rng);
            const double total = col.sum();
            if (total > 0.0) {
                p[a].col(s) = col / total;
            } else {
                p[a](static_cast<int>(rng() % static_cast<std::uint64_t>(n)), s) = 1.0;
            }
        }
    }
    EnvSpec with_uniform = spec;
    if (with_uniform.d0.kind == InitialRule::Kind::Default) with_uniform.d0.kind = InitialRule::Kind::Uniform;
    return TabularMDP(std::move(p), gamma, initial_distribution(with_uniform, n, 0, {}));
}

constexpr double kMinPosition = -1.2;
constexpr double kMaxPosition = 0.6;
constexpr double kMaxSpeed = 0.07;

TabularMDP build_mountain_car(const EnvSpec& spec, double gamma) {
    const int pb = spec.position_bins;
    const int vb = spec.velocity_bins;
    if (pb < 1 || vb < 1) throw std::invalid_argument("mountain_car bins must be positive");
    if (spec.max_substeps < 1) throw std::invalid_argument("max_substeps must be positive");
    const double dx = (kMaxPosition - kMinPosition) / pb;
    const double dv = 2.0 * kMaxSpeed / vb;
    auto cell_of = [&](mountain_car::Continuous c) {
        const int i = std::clamp(static_cast<int>(std::floor((c.position - kMinPosition) / dx)), 0, pb - 1);
        const int j = std::clamp(static_cast<int>(std::floor((c.velocity + kMaxSpeed) / dv)), 0, vb - 1);
        return j * pb + i;
    };
    const int n = pb * vb;
    auto p = zero_transitions(n, 3);
    for (int j = 0; j < vb; ++j) {
        for (int i = 0; i < pb; ++i) {
            const int s = j * pb + i;
            for (int a = 0; a < 3; ++a) {
                // Repeat the action from the cell center until the car leaves the cell.
                mountain_car::Continuous c{kMinPosition + (i + 0.5) * dx, -kMaxSpeed + (j + 0.5) * dv};
                int next = s;
                for (int k = 0; k < spec.max_substeps && next == s; ++k) {
                    c = mountain_car::step(c, a);
                    next = cell_of(c);
                }
                p[a](next, s) = 1.0;
            }
        }
    }
    const int start = cell_of({-0.5, 0.0});
    return TabularMDP(std::move(p), gamma, initial_distribution(spec, n, start, {}));
}

} // namespace

std::string_view to_string(EnvKind kind) {
    switch (kind) {
    case EnvKind::Figure1: return "figure1";
    case EnvKind::Chain: return "chain";
    case EnvKind::Gridworld: return "gridworld";
    case EnvKind::Random: return "random";
    case EnvKind::MountainCar: return "mountain_car_disc";
    case EnvKind::File: return "file";
    }
    return "unknown";
}

EnvKind env_kind_from_string(std::string_view name) {
    for (EnvKind k : {EnvKind::Figure1, EnvKind::Chain, EnvKind::Gridworld, EnvKind::Random, EnvKind::MountainCar,
                      EnvKind::File}) {
        if (to_string(k) == name) return k;
    }
    throw std::invalid_argument("unknown environment kind '" + std::string(name) + "'");
}

double default_gamma(EnvKind kind) { return kind == EnvKind::Figure1 ? 0.99 : 0.9; }

TabularMDP build(const EnvSpec& spec) {
    const double gamma = spec.gamma.value_or(default_gamma(spec.kind));
    switch (spec.kind) {
    case EnvKind::Figure1: return build_figure1(spec, gamma);
    case EnvKind::Chain: return build_chain(spec, gamma);
    case EnvKind::Gridworld: return build_gridworld(spec, gamma);
    case EnvKind::Random: return build_random(spec, gamma);
    case EnvKind::MountainCar: return build_mountain_car(spec, gamma);
    case EnvKind::File: {
        TabularMDP mdp = load_mdp_file(spec.path);
        if (spec.gamma) mdp = mdp.with_gamma(*spec.gamma);
        if (spec.d0.kind != InitialRule::Kind::Default) {
            mdp = mdp.with_d0(initial_distribution(spec, mdp.n_states(), 0, {}));
        }
        return mdp;
    }
    }
    throw std::invalid_argument("unhandled environment kind");
}

std::optional<GridShape> grid_shape(const EnvSpec& spec) {
    if (spec.kind == EnvKind::Gridworld) return GridShape{spec.width, spec.height};
    if (spec.kind == EnvKind::MountainCar) return GridShape{spec.position_bins, spec.velocity_bins};
    return std::nullopt;
}

namespace figure1 {

namespace {
StationaryPolicy make(double root_left, double left_first, double right_first) {
    Matrix probs(6, 2);
    probs << root_left, 1.0 - root_left, left_first, 1.0 - left_first, right_first, 1.0 - right_first, 0.5, 0.5,
        0.5, 0.5, 0.5, 0.5;
    return StationaryPolicy(std::move(probs));
}
} // namespace

StationaryPolicy pi0() { return make(0.5, 0.75, 0.25); }
StationaryPolicy pi1() { return make(2.0 / 3.0, 0.5, 0.0); }
StationaryPolicy pi2() { return make(1.0 / 3.0, 1.0, 0.5); }

} // namespace figure1

namespace mountain_car {

Continuous step(Continuous state, int action) {
    double v = state.velocity + 0.001 * (action - 1) - 0.0025 * std::cos(3.0 * state.position);
    v = std::clamp(v, -kMaxSpeed, kMaxSpeed);
    double x = std::clamp(state.position + v, kMinPosition, kMaxPosition);
    if (x == kMinPosition && v < 0.0) v = 0.0;
    return {x, v};
}

} // namespace mountain_car

std::vector<bool> reachable_states(const TabularMDP& mdp) {
    const int n = mdp.n_states();
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::deque<int> frontier;
    for (int s = 0; s < n; ++s) {
        if (mdp.d0()[s] > 0.0) {
            seen[s] = true;
            frontier.push_back(s);
        }
    }
    while (!frontier.empty()) {
        const int s = frontier.front();
        frontier.pop_front();
        for (int a = 0; a < mdp.n_actions(); ++a) {
            for (int next = 0; next < n; ++next) {
                if (mdp.prob(next, s, a) > 0.0 && !seen[next]) {
                    seen[next] = true;
                    frontier.push_back(next);
                }
            }
        }
    }
    return seen;
}

} // namespace maxent
