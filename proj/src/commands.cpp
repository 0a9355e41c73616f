#include "maxent/commands.hpp"

#include "maxent/envs.hpp"
#include "maxent/model_io.hpp"
#include "maxent/oracle_search.hpp"
#include "maxent/outputs.hpp"
#include "maxent/simulator.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>

#ifndef MAXENT_VERSION
#define MAXENT_VERSION "unknown"
#endif

namespace maxent {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> all_overrides(const CommandOptions& options) {
    auto overrides = options.overrides;
    if (options.seed) overrides.push_back("seed=" + std::to_string(*options.seed));
    return overrides;
}

void prepare_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw ConfigError("output directory " + dir.string() + " is not writable");
}

TabularMDP build_or_config_error(const RunConfig& config) {
    try {
        return build(config.env);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("env: ") + e.what());
    }
}

std::string policy_yaml(const StationaryPolicy& policy) {
    YAML::Emitter out;
    out << YAML::BeginSeq;
    for (Eigen::Index s = 0; s < policy.probs().rows(); ++s) {
        out << YAML::Flow << YAML::BeginSeq;
        for (Eigen::Index a = 0; a < policy.probs().cols(); ++a) out << format_double(policy.probs()(s, a));
        out << YAML::EndSeq;
    }
    out << YAML::EndSeq;
    return out.c_str();
}

/// Cartesian product of the grid, each cell as a list of key=value overrides.
std::vector<std::vector<std::string>> sweep_cells(const SweepSpec& sweep) {
    std::vector<std::vector<std::string>> cells{{}};
    for (const auto& [key, values] : sweep.grid) {
        std::vector<std::vector<std::string>> next;
        for (const auto& cell : cells) {
            for (const auto& v : values) {
                auto extended = cell;
                extended.push_back(key + "=" + v);
                next.push_back(std::move(extended));
            }
        }
        cells = std::move(next);
    }
    return cells;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
    return s;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SearchTooLarge& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const OracleFailure& e) {
        err << "run failed at " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        err << "run failed: " << e.what() << "\n";
        return kExitRuntime;
    }
}

} // namespace

fs::path default_output_root() {
    const char* root = std::getenv(kOutputRootVariable);
    return (root && *root) ? fs::path(root) : fs::path("runs");
}

fs::path resolve_output_dir(const CommandOptions& options, const RunConfig& config) {
    if (options.out) return *options.out;
    if (!config.output_dir.empty()) return config.output_dir;
    return default_output_root() / options.config.stem();
}

RunSummary execute_run(const RunConfig& config, const fs::path& dir) {
    prepare_dir(dir);
    const TabularMDP mdp = build_or_config_error(config);
    const RewardFunctional functional = make_functional(config.functional, mdp.n_states());

    RunManifest manifest;
    manifest.code_version = MAXENT_VERSION;
    manifest.seed = config.driver.seed;
    manifest.started = utc_timestamp();
    manifest.config = config;

    std::optional<TransitionCounts> counts;
    DriverResult result = [&]() {
        if (config.driver.mode == OracleMode::Exact) return run(mdp, functional, config.driver);
        counts.emplace(mdp.n_states(), mdp.n_actions());
        if (!config.counts_from.empty()) {
            try {
                counts = counts_from_json(read_text_file(config.counts_from));
            } catch (const std::exception& e) {
                throw ConfigError("driver.counts_from: " + std::string(e.what()));
            }
            if (counts->n_states() != mdp.n_states() || counts->n_actions() != mdp.n_actions()) {
                throw ConfigError("driver.counts_from: counts shape does not match the environment");
            }
        }
        EpisodicSimulator sim = make_simulator(mdp, config.driver.seed);
        DriverHooks hooks;
        hooks.reference = &mdp;
        return run(sim, *counts, functional, config.driver, hooks);
    }();
    const Vector& density = result.final_density.probs();

    auto emit = [&](const std::string& role, const std::string& name, const std::string& content) {
        write_text_file_atomic(dir / name, content);
        manifest.files[role] = name;
    };
    emit("trace", "trace.csv", trace_csv(result.trace, config.wall_time));
    emit("occupancy", "occupancy.csv", occupancy_csv(density));
    emit("mixture", "mixture.txt", mixture_to_json(result.mixture));
    if (const auto shape = grid_shape(config.env)) emit("heatmap", "heatmap.pgm", heatmap_pgm(density, *shape));
    if (counts) emit("counts", "counts.txt", counts_to_json(*counts));

    const double conventional = functional.conventional_value(density);
    manifest.final_objective = result.final_objective;
    manifest.final_conventional = conventional;
    manifest.final_raw_entropy = result.final_raw_entropy;
    manifest.finished = utc_timestamp();
    manifest.files["manifest"] = "manifest.txt";
    write_text_file_atomic(dir / "manifest.txt", manifest_to_yaml(manifest));
    return RunSummary{std::move(result), conventional, dir};
}

int cmd_run(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        const RunConfig config = load_run_config(options.config, all_overrides(options));
        const fs::path dir = resolve_output_dir(options, config);
        const RunSummary summary = execute_run(config, dir);
        out << "final_objective " << format_double(summary.result.final_objective) << "\n"
            << "final_" << to_string(config.functional.kind) << "_conventional "
            << format_double(summary.final_conventional) << "\n"
            << "final_raw_entropy " << format_double(summary.result.final_raw_entropy) << "\n"
            << "iterations " << summary.result.trace.size() << "\n"
            << "output " << dir.string() << "\n";
        return kExitOk;
    });
}

int cmd_oracle(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        const RunConfig config = load_run_config(options.config, all_overrides(options));
        const TabularMDP mdp = build_or_config_error(config);
        const RewardFunctional functional = make_functional(config.functional, mdp.n_states());
        const GridSearchResult r = grid_search_oracle(mdp, functional, config.oracle_resolution);

        YAML::Emitter y;
        y << YAML::BeginMap;
        y << YAML::Key << "functional" << YAML::Value << std::string(to_string(config.functional.kind));
        y << YAML::Key << "resolution" << YAML::Value << format_double(config.oracle_resolution);
        y << YAML::Key << "evaluated" << YAML::Value << r.evaluated;
        y << YAML::Key << "best_value" << YAML::Value << format_double(r.best_value);
        y << YAML::Key << "best_conventional" << YAML::Value
          << format_double(functional.conventional_value(r.best_density));
        y << YAML::Key << "best_policy" << YAML::Value << YAML::Load(policy_yaml(r.best_policy));
        y << YAML::Key << "best_density" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (Eigen::Index s = 0; s < r.best_density.size(); ++s) y << format_double(r.best_density[s]);
        y << YAML::EndSeq;
        y << YAML::Key << "best_raw_entropy" << YAML::Value << format_double(r.best_raw_entropy);
        y << YAML::Key << "raw_entropy_policy" << YAML::Value << YAML::Load(policy_yaml(r.entropy_policy));
        y << YAML::EndMap;
        const std::string text = std::string(y.c_str()) + "\n";

        const fs::path dir = resolve_output_dir(options, config);
        prepare_dir(dir);
        write_text_file_atomic(dir / "oracle.txt", text);
        out << text;
        return kExitOk;
    });
}

int cmd_sweep(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        const auto base_overrides = all_overrides(options);
        const RunConfig base = load_run_config(options.config, base_overrides);
        if (base.sweep.seeds.empty() && base.sweep.grid.empty()) {
            throw ConfigError(options.config.string() + ": sweep: empty sweep (no seeds and no grid)");
        }
        for (const auto& [key, values] : base.sweep.grid) {
            if (values.empty()) throw ConfigError(options.config.string() + ": sweep.grid." + key + ": empty list");
        }
        const auto cells = sweep_cells(base.sweep);
        const std::vector<std::uint64_t> seeds =
            base.sweep.seeds.empty() ? std::vector<std::uint64_t>{base.driver.seed} : base.sweep.seeds;

        struct Job {
            std::size_t cell;
            std::uint64_t seed;
            RunConfig config;
        };
        std::vector<Job> jobs;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            for (auto seed : seeds) {
                auto overrides = base_overrides;
                overrides.insert(overrides.end(), cells[c].begin(), cells[c].end());
                overrides.push_back("seed=" + std::to_string(seed));
                jobs.push_back({c, seed, load_run_config(options.config, overrides)});
            }
        }

        const fs::path root = resolve_output_dir(options, base);
        prepare_dir(root);
        struct Outcome {
            bool ok = false;
            double objective = 0.0;
            double raw_entropy = 0.0;
            std::string error;
        };
        std::vector<Outcome> outcomes(jobs.size());
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            const fs::path dir = root / ("cell-" + std::to_string(jobs[j].cell)) / ("seed-" + std::to_string(jobs[j].seed));
            try {
                const RunSummary s = execute_run(jobs[j].config, dir);
                outcomes[j] = {true, s.result.final_objective, s.result.final_raw_entropy, ""};
            } catch (const std::exception& e) {
                outcomes[j].error = e.what();
                err << "cell " << jobs[j].cell << " seed " << jobs[j].seed << " failed: " << e.what() << "\n";
            }
        }

        struct Stats {
            double sum = 0.0, min = std::numeric_limits<double>::infinity(), max = -std::numeric_limits<double>::infinity();
            int n = 0;
        };
        std::map<std::size_t, Stats> stats;
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            if (!outcomes[j].ok) continue;
            Stats& st = stats[jobs[j].cell];
            st.sum += outcomes[j].objective;
            st.min = std::min(st.min, outcomes[j].objective);
            st.max = std::max(st.max, outcomes[j].objective);
            ++st.n;
        }

        std::string csv = "cell,seed,overrides,status,final_objective,final_raw_entropy,cell_mean,cell_min,cell_max\n";
        bool any_failed = false;
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            const Outcome& o = outcomes[j];
            any_failed = any_failed || !o.ok;
            csv += std::to_string(jobs[j].cell) + ',' + std::to_string(jobs[j].seed) + ',' +
                   csv_field(join(cells[jobs[j].cell], ";")) + ',' + (o.ok ? "ok" : "failed") + ',';
            csv += o.ok ? format_double(o.objective) + ',' + format_double(o.raw_entropy) : std::string(",");
            const auto it = stats.find(jobs[j].cell);
            if (it != stats.end()) {
                csv += ',' + format_double(it->second.sum / it->second.n) + ',' + format_double(it->second.min) + ',' +
                       format_double(it->second.max);
            } else {
                csv += ",,,";
            }
            csv += '\n';
        }
        write_text_file_atomic(root / "aggregate.csv", csv);
        out << "runs " << jobs.size() << "\n"
            << "failed " << std::count_if(outcomes.begin(), outcomes.end(), [](const Outcome& o) { return !o.ok; })
            << "\n"
            << "aggregate " << (root / "aggregate.csv").string() << "\n";
        return any_failed ? kExitRuntime : kExitOk;
    });
}

int cmd_export_env(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        const RunConfig config = load_run_config(options.config, all_overrides(options));
        const TabularMDP mdp = build_or_config_error(config);
        const fs::path dir = resolve_output_dir(options, config);
        prepare_dir(dir);
        save_mdp_file(mdp, dir / "mdp.json");
        out << (dir / "mdp.json").string() << "\n";
        return kExitOk;
    });
}

} // namespace maxent
