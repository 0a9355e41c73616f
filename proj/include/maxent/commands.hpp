#pragma once

#include "maxent/config.hpp"
#include "maxent/driver.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace maxent {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

/// Environment variable naming the default output root ("runs" when unset).
inline constexpr const char* kOutputRootVariable = "MAXENT_OUTPUT_ROOT";

struct CommandOptions {
    std::filesystem::path config;
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> overrides;
};

std::filesystem::path default_output_root();

/// Output directory for a command: --out, then output.dir, then <root>/<config stem>.
std::filesystem::path resolve_output_dir(const CommandOptions& options, const RunConfig& config);

struct RunSummary {
    DriverResult result;
    double final_conventional;
    std::filesystem::path directory;
};

/// Runs the driver for a resolved config and writes every artifact into dir.
RunSummary execute_run(const RunConfig& config, const std::filesystem::path& dir);

int cmd_run(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_oracle(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_sweep(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_export_env(const CommandOptions& options, std::ostream& out, std::ostream& err);

} // namespace maxent
