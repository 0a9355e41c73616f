#include "maxent/outputs.hpp"

#include "maxent/model_io.hpp"

#include <yaml-cpp/yaml.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace maxent {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string trace_csv(const IterationTrace& trace, bool with_wall_time) {
    std::string out = "iter,objective,raw_entropy,support_size,linf_density_err,wall_ms\n";
    for (const auto& r : trace) {
        out += std::to_string(r.iteration) + ',' + g17(r.objective) + ',' + g17(r.raw_entropy) + ',' +
               std::to_string(r.support_size) + ',' + (r.linf_density_error ? g17(*r.linf_density_error) : "") + ',' +
               (with_wall_time ? g17(r.wall_ms) : "0") + '\n';
    }
    return out;
}

std::string occupancy_csv(const Vector& density) {
    std::string out = "state,probability\n";
    for (Eigen::Index s = 0; s < density.size(); ++s) out += std::to_string(s) + ',' + g17(density[s]) + '\n';
    return out;
}

Vector parse_occupancy_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "state,probability") throw FormatError("occupancy CSV: bad header");
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw FormatError("occupancy CSV: bad row '" + line + "'");
        if (std::stol(line.substr(0, comma)) != static_cast<long>(values.size())) {
            throw FormatError("occupancy CSV: states out of order at '" + line + "'");
        }
        values.push_back(std::stod(line.substr(comma + 1)));
    }
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::uint8_t heatmap_level(double probability) {
    constexpr double floor = -12.0;
    const double lp = probability > 0.0 ? std::max(std::log(probability), floor) : floor;
    return static_cast<std::uint8_t>(std::lround(255.0 * (lp - floor) / -floor));
}

std::string heatmap_pgm(const Vector& density, GridShape shape) {
    if (density.size() != static_cast<Eigen::Index>(shape.width) * shape.height) {
        throw std::invalid_argument("heatmap: density size does not match the grid");
    }
    std::string out = "P5\n" + std::to_string(shape.width) + " " + std::to_string(shape.height) + "\n255\n";
    for (Eigen::Index s = 0; s < density.size(); ++s) out += static_cast<char>(heatmap_level(density[s]));
    return out;
}

std::string manifest_to_yaml(const RunManifest& m) {
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "code_version" << YAML::Value << YAML::DoubleQuoted << m.code_version;
    out << YAML::Key << "seed" << YAML::Value << m.seed;
    out << YAML::Key << "started" << YAML::Value << YAML::DoubleQuoted << m.started;
    out << YAML::Key << "finished" << YAML::Value << YAML::DoubleQuoted << m.finished;
    out << YAML::Key << "final_objective" << YAML::Value << format_double(m.final_objective);
    out << YAML::Key << "final_conventional" << YAML::Value << format_double(m.final_conventional);
    out << YAML::Key << "final_raw_entropy" << YAML::Value << format_double(m.final_raw_entropy);
    out << YAML::Key << "files" << YAML::Value << YAML::BeginMap;
    for (const auto& [role, name] : m.files) out << YAML::Key << role << YAML::Value << YAML::DoubleQuoted << name;
    out << YAML::EndMap;
    out << YAML::Key << "config" << YAML::Value << YAML::Load(config_to_yaml(m.config));
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

RunManifest parse_manifest(const std::string& text, const std::string& source) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw FormatError(source + ": " + e.msg);
    }
    if (!root.IsMap()) throw FormatError(source + ": expected a mapping");
    auto need = [&](const char* key) {
        if (!root[key]) throw FormatError(source + ": missing field '" + std::string(key) + "'");
        return root[key];
    };
    RunManifest m;
    try {
        m.code_version = need("code_version").as<std::string>();
        m.seed = need("seed").as<std::uint64_t>();
        m.started = need("started").as<std::string>();
        m.finished = need("finished").as<std::string>();
        m.final_objective = need("final_objective").as<double>();
        m.final_conventional = need("final_conventional").as<double>();
        m.final_raw_entropy = need("final_raw_entropy").as<double>();
        for (const auto& kv : need("files")) m.files[kv.first.as<std::string>()] = kv.second.as<std::string>();
    } catch (const YAML::Exception& e) {
        throw FormatError(source + ": " + e.msg);
    }
    m.config = parse_run_config(YAML::Dump(need("config")), source + " (config)");
    return m;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace maxent
