#pragma once

#include "maxent/driver.hpp"
#include "maxent/envs.hpp"
#include "maxent/objectives.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace maxent {

/// Invalid or unreadable run configuration. Messages carry "source:line: field: problem".
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TargetSpec {
    enum class Kind { None, Uniform, Explicit };
    Kind kind = Kind::None;
    std::vector<double> values;
    bool operator==(const TargetSpec&) const = default;
};

struct FunctionalSpec {
    FunctionalKind kind = FunctionalKind::SmoothedEntropy;
    double sigma = 1e-3;
    TargetSpec target;
    bool operator==(const FunctionalSpec&) const = default;
};

enum class Schedule { Manual, Smooth, Entropy };

std::string_view to_string(Schedule schedule);

struct SweepSpec {
    std::vector<std::uint64_t> seeds;
    /// Dotted key and the YAML text of each value it takes.
    std::vector<std::pair<std::string, std::vector<std::string>>> grid;
    bool operator==(const SweepSpec&) const = default;
};

/// Fully resolved run parameters: schedule-derived values are already filled in.
struct RunConfig {
    EnvSpec env;
    FunctionalSpec functional;
    Schedule schedule = Schedule::Manual;
    double eps = 0.1; ///< accuracy handed to the schedule formulas
    DriverConfig driver;
    std::string counts_from; ///< sampled mode: counts snapshot to warm-start from
    std::string output_dir;
    bool wall_time = false;
    double oracle_resolution = 0.02;
    SweepSpec sweep;
    bool operator==(const RunConfig&) const = default;
};

/**
 * Parses a YAML run configuration.
 *
 * overrides are "dotted.key=value" strings applied on top of the document;
 * the value is read as YAML. Relative file paths are resolved against base_dir.
 */
RunConfig parse_run_config(const std::string& text, const std::string& source,
                           const std::vector<std::string>& overrides = {},
                           const std::filesystem::path& base_dir = ".");

RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// YAML text that parses back to the same RunConfig.
std::string config_to_yaml(const RunConfig& config);

RewardFunctional make_functional(const FunctionalSpec& spec, int n_states);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

} // namespace maxent
