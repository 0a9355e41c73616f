#pragma once

#include "maxent/config.hpp"
#include "maxent/driver.hpp"
#include "maxent/envs.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace maxent {

/// Columns: iter, objective, raw_entropy, support_size, linf_density_err, wall_ms.
/// wall_ms is written as 0 unless with_wall_time, so equal runs give equal bytes.
std::string trace_csv(const IterationTrace& trace, bool with_wall_time);

/// Columns: state, probability. Values are printed to round-trip exactly.
std::string occupancy_csv(const Vector& density);
Vector parse_occupancy_csv(const std::string& text);

/// Gray level of one cell: 255 * (max(log p, -12) + 12) / 12, rounded.
std::uint8_t heatmap_level(double probability);

/// Binary portable graymap, one pixel per state, row = y (or velocity bin).
std::string heatmap_pgm(const Vector& density, GridShape shape);

struct RunManifest {
    std::string code_version;
    std::uint64_t seed = 0;
    std::string started;
    std::string finished;
    double final_objective = 0.0;
    double final_conventional = 0.0; ///< the functional's un-negated metric
    double final_raw_entropy = 0.0;
    std::map<std::string, std::string> files; ///< role -> file name inside the run directory
    RunConfig config;
    bool operator==(const RunManifest&) const = default;
};

std::string manifest_to_yaml(const RunManifest& manifest);
RunManifest parse_manifest(const std::string& text, const std::string& source = "manifest");

/// UTC timestamp, ISO 8601 with seconds.
std::string utc_timestamp();

} // namespace maxent
