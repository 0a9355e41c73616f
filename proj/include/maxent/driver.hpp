#pragma once

#include "maxent/mdp.hpp"
#include "maxent/objectives.hpp"
#include "maxent/sample_oracles.hpp"
#include "maxent/simulator.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace maxent {

enum class OracleMode { Exact, Sampled };

std::string_view to_string(OracleMode mode);
OracleMode oracle_mode_from_string(std::string_view name);

struct DriverConfig {
    double eta = 0.05; ///< Frank-Wolfe step size
    int iterations = 100;
    double eps0 = 0.01; ///< density oracle tolerance
    double eps1 = 1e-4; ///< planning oracle tolerance; the sampled planner's target suboptimality
    OracleMode mode = OracleMode::Exact;
    std::uint64_t seed = 0;

    // Sampled mode only.
    double delta = 0.1;
    std::optional<std::uint64_t> plan_m;
    std::optional<int> plan_n;
    std::optional<int> plan_t0;
    std::optional<std::uint64_t> density_m;
    std::optional<int> density_t0;

    void validate() const;
    bool operator==(const DriverConfig&) const = default;
};

struct IterationRecord {
    int iteration = 0;
    double objective = 0.0;   ///< R at the density estimate the iteration planned against
    double raw_entropy = 0.0; ///< Shannon entropy of that estimate
    int support_size = 0;
    std::optional<double> linf_density_error;
    double wall_ms = 0.0;
};

using IterationTrace = std::vector<IterationRecord>;

/// What the driver handed to the planner at one iteration.
struct IterationEvent {
    int iteration;
    const Vector& density;
    const Vector& reward;
    const StationaryPolicy& planned;
};

struct DriverHooks {
    std::function<void(const IterationEvent&)> on_iteration;
    /// Sampled mode: true model used only to report the density estimation error.
    const TabularMDP* reference = nullptr;
};

struct DriverResult {
    MixturePolicy mixture;
    IterationTrace trace;
    StateDistribution final_density; ///< exact in exact mode, a fresh estimate in sampled mode
    double final_objective = 0.0;
    double final_raw_entropy = 0.0;
};

/// An oracle failed inside the Frank-Wolfe loop.
class OracleFailure : public std::runtime_error {
public:
    OracleFailure(int iteration, const std::string& what)
        : std::runtime_error("iteration " + std::to_string(iteration) + ": " + what), iteration_(iteration) {}
    int iteration() const { return iteration_; }

private:
    int iteration_;
};

/**
 * Frank-Wolfe over policy mixtures, known-model oracles.
 *
 * Starts from the uniform policy. Each iteration linearizes R at the current
 * occupancy, plans against that reward and mixes the plan in with weight eta.
 */
DriverResult run(const TabularMDP& mdp, const RewardFunctional& functional, const DriverConfig& config,
                 const DriverHooks& hooks = {});

/// Same loop against a black-box simulator: rollout density estimates and the count-based planner.
DriverResult run(EpisodicSimulator& sim, TransitionCounts& counts, const RewardFunctional& functional,
                 const DriverConfig& config, const DriverHooks& hooks = {});

struct SmoothSchedule {
    double eps1;
    double eps0;
    double eta;
    std::int64_t iterations;
};

/// Parameters that make the loop eps-optimal for a beta-smooth, B-bounded functional.
SmoothSchedule schedule_smooth(double eps, double beta, double bound);

struct EntropySchedule {
    double sigma;
    double eps1;
    double eps0;
    double eta;
    std::int64_t iterations;
};

/// Parameters for eps-optimal Shannon entropy through the smoothed surrogate.
EntropySchedule schedule_entropy(double eps, int n_states);

} // namespace maxent
