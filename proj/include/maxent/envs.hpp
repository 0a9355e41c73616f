#pragma once

#include "maxent/mdp.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace maxent {

enum class EnvKind { Figure1, Chain, Gridworld, Random, MountainCar, File };

std::string_view to_string(EnvKind kind);
EnvKind env_kind_from_string(std::string_view name);

struct GridCell {
    int x = 0;
    int y = 0;
    bool operator==(const GridCell&) const = default;
};

/// How d0 is chosen: the environment's own start, uniform, or a given state.
struct InitialRule {
    enum class Kind { Default, Uniform, State };
    Kind kind = Kind::Default;
    int state = 0;
    bool operator==(const InitialRule&) const = default;
};

/**
 * Parameters of a built-in environment. Only the fields of the selected kind
 * are read.
 *
 * figure1 state order: s00, s10, s11, s20, s21, s22.
 * gridworld / mountain_car state index: row * width + column, where the row
 * is y (gridworld) or the velocity bin (mountain car).
 */
struct EnvSpec {
    EnvKind kind = EnvKind::Figure1;
    std::optional<double> gamma; ///< 0.99 for figure1, 0.9 otherwise
    InitialRule d0;

    // chain
    int length = 5;
    double slip = 0.0; ///< chain: moves the opposite way; gridworld: random direction

    // gridworld
    int width = 10;
    int height = 10;
    std::vector<GridCell> walls;
    GridCell start;

    // random
    int n_states = 4;
    int n_actions = 2;
    std::uint64_t seed = 0;
    double dirichlet_alpha = 1.0;

    // mountain_car
    int position_bins = 10;
    int velocity_bins = 9;
    int max_substeps = 100;

    // file
    std::string path;

    bool operator==(const EnvSpec&) const = default;
};

double default_gamma(EnvKind kind);

TabularMDP build(const EnvSpec& spec);

struct GridShape {
    int width;
    int height;
};

/// Two-dimensional layout of the state space, for grid-shaped kinds.
std::optional<GridShape> grid_shape(const EnvSpec& spec);

namespace figure1 {
inline constexpr int kRoot = 0;
inline constexpr int kLeft = 1;
inline constexpr int kRight = 2;
inline constexpr int kLeaf0 = 3;
inline constexpr int kLeaf1 = 4;
inline constexpr int kLeaf2 = 5;

/// The three policies of the non-concavity construction; pi0 = (pi1 + pi2) / 2.
StationaryPolicy pi0();
StationaryPolicy pi1();
StationaryPolicy pi2();
} // namespace figure1

namespace mountain_car {
struct Continuous {
    double position;
    double velocity;
};

/// One step of the classic dynamics with action in {0, 1, 2}.
Continuous step(Continuous state, int action);
} // namespace mountain_car

/// States reachable from the support of d0 under some sequence of actions.
std::vector<bool> reachable_states(const TabularMDP& mdp);

} // namespace maxent
