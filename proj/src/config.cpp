#include "maxent/config.hpp"

#include "maxent/model_io.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <climits>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace maxent {

namespace {

struct Context {
    std::string source;
    std::set<std::string> overridden; ///< dotted keys set from the command line
};

class Section {
public:
    Section(YAML::Node node, std::string path, const Context& context)
        : node_(std::move(node)), path_(std::move(path)), context_(&context) {
        if (node_ && !node_.IsNull() && !node_.IsMap()) fail(node_, "", "expected a mapping");
    }

    [[noreturn]] void fail(const YAML::Node& at, const std::string& key, const std::string& message) const {
        throw ConfigError(location(at, qualified(key)) + ": " + qualified(key) + (key.empty() && path_.empty() ? "" : ": ") +
                          message);
    }

    std::string location(const YAML::Node& at, const std::string& field) const {
        for (const auto& key : context_->overridden) {
            if (field == key || field.rfind(key + ".", 0) == 0) return context_->source + ": override '" + key + "'";
        }
        const YAML::Mark mark = at ? at.Mark() : YAML::Mark::null_mark();
        if (mark.is_null()) return context_->source + ": override";
        return context_->source + ":" + std::to_string(mark.line + 1);
    }

    std::string qualified(const std::string& key) const {
        if (path_.empty()) return key;
        return key.empty() ? path_ : path_ + "." + key;
    }

    bool has(const std::string& key) const { return node_ && node_.IsMap() && node_[key]; }

    YAML::Node raw(const std::string& key) {
        consumed_.insert(key);
        if (has(key)) return node_[key];
        // Failed const lookup: a node that converts to false.
        const YAML::Node empty(YAML::NodeType::Map);
        return empty[key];
    }

    YAML::Node required(const std::string& key) {
        if (!has(key)) fail(node_, "", "missing required field '" + qualified(key) + "'");
        return raw(key);
    }

    Section child(const std::string& key) { return Section(raw(key), qualified(key), *context_); }

    template <typename T>
    T scalar(const YAML::Node& n, const std::string& key, const char* expected) const {
        if (!n.IsScalar()) fail(n, key, std::string("expected ") + expected);
        try {
            return n.as<T>();
        } catch (const YAML::Exception&) {
            fail(n, key, std::string("expected ") + expected + ", got '" + n.Scalar() + "'");
        }
    }

    double number(const YAML::Node& n, const std::string& key) const {
        const auto v = scalar<double>(n, key, "a number");
        if (!std::isfinite(v)) fail(n, key, "expected a finite number");
        return v;
    }

    long long integer(const YAML::Node& n, const std::string& key) const {
        return scalar<long long>(n, key, "an integer");
    }

    std::uint64_t unsigned_integer(const YAML::Node& n, const std::string& key) const {
        if (n.IsScalar() && !n.Scalar().empty() && n.Scalar().front() == '-') {
            fail(n, key, "expected a non-negative integer");
        }
        return scalar<std::uint64_t>(n, key, "a non-negative integer");
    }

    int bounded_int(const YAML::Node& n, const std::string& key, long long lo) const {
        const long long v = integer(n, key);
        if (v < lo || v > INT_MAX) fail(n, key, "must be an integer >= " + std::to_string(lo));
        return static_cast<int>(v);
    }

    std::optional<double> opt_number(const std::string& key) {
        auto n = raw(key);
        if (!n) return std::nullopt;
        return number(n, key);
    }
    std::optional<int> opt_int(const std::string& key, long long lo) {
        auto n = raw(key);
        if (!n) return std::nullopt;
        return bounded_int(n, key, lo);
    }
    std::optional<std::uint64_t> opt_unsigned(const std::string& key) {
        auto n = raw(key);
        if (!n) return std::nullopt;
        return unsigned_integer(n, key);
    }
    std::optional<std::string> opt_string(const std::string& key) {
        auto n = raw(key);
        if (!n) return std::nullopt;
        return scalar<std::string>(n, key, "a string");
    }
    std::optional<bool> opt_bool(const std::string& key) {
        auto n = raw(key);
        if (!n) return std::nullopt;
        return scalar<bool>(n, key, "true or false");
    }

    /// Rejects keys that were never read.
    void finish(const std::string& context = "") const {
        if (!node_ || !node_.IsMap()) return;
        for (auto it = node_.begin(); it != node_.end(); ++it) {
            const auto key = it->first.as<std::string>();
            if (!consumed_.count(key)) {
                fail(it->first, "", "unknown field '" + qualified(key) + "'" + context);
            }
        }
    }

    const YAML::Node& node() const { return node_; }

private:
    YAML::Node node_;
    std::string path_;
    const Context* context_;
    std::set<std::string> consumed_;
};

std::vector<std::string> split_dotted(const std::string& key) {
    std::vector<std::string> parts;
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    return parts;
}

void set_path(YAML::Node node, const std::vector<std::string>& parts, std::size_t i, const YAML::Node& value,
              const std::string& whole) {
    if (i + 1 == parts.size()) {
        node[parts[i]] = value;
        return;
    }
    if (!node[parts[i]] || node[parts[i]].IsNull()) node[parts[i]] = YAML::Node(YAML::NodeType::Map);
    YAML::Node next = node[parts[i]];
    if (!next.IsMap()) throw ConfigError("override '" + whole + "': '" + parts[i] + "' is not a mapping");
    set_path(next, parts, i + 1, value, whole);
}

void apply_override(YAML::Node& root, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == assignment.size()) {
        throw ConfigError("override '" + assignment + "': expected key=value");
    }
    const std::string key = assignment.substr(0, eq);
    const auto parts = split_dotted(key);
    for (const auto& p : parts) {
        if (p.empty()) throw ConfigError("override '" + assignment + "': empty key segment");
    }
    YAML::Node value;
    try {
        value = YAML::Load(assignment.substr(eq + 1));
    } catch (const YAML::Exception& e) {
        throw ConfigError("override '" + assignment + "': " + e.msg);
    }
    if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
    set_path(root, parts, 0, value, assignment);
}

std::string absolute_path(const std::filesystem::path& base_dir, const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_relative()) p = base_dir / p;
    return std::filesystem::absolute(p).lexically_normal().string();
}

GridCell parse_cell(Section& s, const YAML::Node& n, const std::string& key) {
    if (!n.IsSequence() || n.size() != 2) s.fail(n, key, "expected [x, y]");
    return GridCell{s.bounded_int(n[0], key, INT_MIN), s.bounded_int(n[1], key, INT_MIN)};
}

EnvSpec parse_env(Section env) {
    EnvSpec spec;
    const auto kind_node = env.required("kind");
    const auto kind_name = env.scalar<std::string>(kind_node, "kind", "an environment kind");
    try {
        spec.kind = env_kind_from_string(kind_name);
    } catch (const std::invalid_argument& e) {
        env.fail(kind_node, "kind", e.what());
    }
    const auto gamma_node = env.required("gamma");
    spec.gamma = env.number(gamma_node, "gamma");
    if (!(*spec.gamma >= 0.0 && *spec.gamma < 1.0)) env.fail(gamma_node, "gamma", "must lie in [0, 1)");

    if (auto n = env.raw("d0")) {
        const auto text = env.scalar<std::string>(n, "d0", "'default', 'uniform' or a state index");
        if (text == "default") {
            spec.d0.kind = InitialRule::Kind::Default;
        } else if (text == "uniform") {
            spec.d0.kind = InitialRule::Kind::Uniform;
        } else {
            spec.d0.kind = InitialRule::Kind::State;
            spec.d0.state = env.bounded_int(n, "d0", 0);
        }
    }

    switch (spec.kind) {
    case EnvKind::Figure1:
        break;
    case EnvKind::Chain:
        spec.length = env.opt_int("length", 1).value_or(spec.length);
        spec.slip = env.opt_number("slip").value_or(spec.slip);
        break;
    case EnvKind::Gridworld:
        spec.width = env.opt_int("width", 1).value_or(spec.width);
        spec.height = env.opt_int("height", 1).value_or(spec.height);
        spec.slip = env.opt_number("slip").value_or(spec.slip);
        if (auto n = env.raw("walls")) {
            if (!n.IsSequence()) env.fail(n, "walls", "expected a list of [x, y]");
            for (const auto& cell : n) spec.walls.push_back(parse_cell(env, cell, "walls"));
        }
        if (auto n = env.raw("start")) spec.start = parse_cell(env, n, "start");
        break;
    case EnvKind::Random:
        spec.n_states = env.opt_int("n_states", 1).value_or(spec.n_states);
        spec.n_actions = env.opt_int("n_actions", 1).value_or(spec.n_actions);
        spec.seed = env.opt_unsigned("seed").value_or(spec.seed);
        spec.dirichlet_alpha = env.opt_number("dirichlet_alpha").value_or(spec.dirichlet_alpha);
        break;
    case EnvKind::MountainCar:
        spec.position_bins = env.opt_int("position_bins", 1).value_or(spec.position_bins);
        spec.velocity_bins = env.opt_int("velocity_bins", 1).value_or(spec.velocity_bins);
        spec.max_substeps = env.opt_int("max_substeps", 1).value_or(spec.max_substeps);
        break;
    case EnvKind::File:
        spec.path = env.scalar<std::string>(env.required("path"), "path", "a file path");
        break;
    }
    env.finish(" for env kind '" + kind_name + "'");
    return spec;
}

FunctionalSpec parse_functional(Section f) {
    FunctionalSpec spec;
    if (auto n = f.raw("kind")) {
        try {
            spec.kind = functional_kind_from_string(f.scalar<std::string>(n, "kind", "a functional kind"));
        } catch (const std::invalid_argument& e) {
            f.fail(n, "kind", e.what());
        }
    }
    if (auto n = f.raw("sigma")) {
        spec.sigma = f.number(n, "sigma");
        if (!(spec.sigma > 0.0)) f.fail(n, "sigma", "must be positive");
    }
    if (auto n = f.raw("target")) {
        if (spec.kind == FunctionalKind::SmoothedEntropy) f.fail(n, "target", "smoothed_entropy takes no target");
        if (n.IsScalar() && n.Scalar() == "uniform") {
            spec.target.kind = TargetSpec::Kind::Uniform;
        } else if (n.IsSequence()) {
            spec.target.kind = TargetSpec::Kind::Explicit;
            for (const auto& v : n) spec.target.values.push_back(f.number(v, "target"));
        } else {
            f.fail(n, "target", "expected 'uniform' or a list of probabilities");
        }
    } else if (spec.kind != FunctionalKind::SmoothedEntropy) {
        f.fail(f.node(), "", "missing required field '" + f.qualified("target") + "'");
    }
    f.finish();
    return spec;
}

Schedule schedule_from_string(const std::string& name) {
    if (name == "manual") return Schedule::Manual;
    if (name == "smooth") return Schedule::Smooth;
    if (name == "entropy") return Schedule::Entropy;
    throw std::invalid_argument("unknown schedule '" + name + "' (expected manual, smooth or entropy)");
}

struct ExplicitDriverKeys {
    bool eta = false, iterations = false, eps0 = false, eps1 = false;
};

ExplicitDriverKeys parse_driver(Section d, RunConfig& config, const std::filesystem::path& base_dir) {
    ExplicitDriverKeys given;
    DriverConfig& drv = config.driver;
    if (auto n = d.raw("schedule")) {
        try {
            config.schedule = schedule_from_string(d.scalar<std::string>(n, "schedule", "a schedule name"));
        } catch (const std::invalid_argument& e) {
            d.fail(n, "schedule", e.what());
        }
    }
    if (auto n = d.raw("eps")) {
        config.eps = d.number(n, "eps");
        if (!(config.eps > 0.0 && config.eps < 1.0)) d.fail(n, "eps", "must lie in (0, 1)");
    }
    if (auto n = d.raw("mode")) {
        try {
            drv.mode = oracle_mode_from_string(d.scalar<std::string>(n, "mode", "exact or sampled"));
        } catch (const std::invalid_argument& e) {
            d.fail(n, "mode", e.what());
        }
    }
    auto unit = [&](const char* key, double& target, bool& flag) {
        if (auto n = d.raw(key)) {
            target = d.number(n, key);
            if (!(target > 0.0 && target < 1.0)) d.fail(n, key, "must lie in (0, 1)");
            flag = true;
        }
    };
    bool unused = false;
    unit("eta", drv.eta, given.eta);
    unit("eps0", drv.eps0, given.eps0);
    unit("eps1", drv.eps1, given.eps1);
    unit("delta", drv.delta, unused);
    if (auto n = d.raw("iterations")) {
        drv.iterations = d.bounded_int(n, "iterations", 1);
        given.iterations = true;
    }
    drv.plan_m = d.opt_unsigned("plan_m");
    drv.plan_n = d.opt_int("plan_n", 1);
    drv.plan_t0 = d.opt_int("plan_t0", 1);
    drv.density_m = d.opt_unsigned("density_m");
    drv.density_t0 = d.opt_int("density_t0", 1);
    if (drv.plan_m && *drv.plan_m == 0) d.fail(d.raw("plan_m"), "plan_m", "must be positive");
    if (drv.density_m && *drv.density_m == 0) d.fail(d.raw("density_m"), "density_m", "must be positive");
    if (auto path = d.opt_string("counts_from")) {
        if (drv.mode != OracleMode::Sampled) d.fail(d.raw("counts_from"), "counts_from", "needs mode: sampled");
        config.counts_from = absolute_path(base_dir, *path);
    }
    d.finish();
    return given;
}

void apply_schedule(RunConfig& config, const ExplicitDriverKeys& given, bool sigma_given, int n_states,
                    const std::string& source) {
    if (config.schedule == Schedule::Manual) return;
    double eta = 0, eps0 = 0, eps1 = 0;
    std::int64_t iterations = 0;
    if (config.schedule == Schedule::Entropy) {
        if (config.functional.kind != FunctionalKind::SmoothedEntropy) {
            throw ConfigError(source + ": driver.schedule: 'entropy' needs functional.kind smoothed_entropy");
        }
        if (n_states < 2) throw ConfigError(source + ": driver.schedule: 'entropy' needs at least two states");
        const auto s = schedule_entropy(config.eps, n_states);
        if (!sigma_given) config.functional.sigma = s.sigma;
        eta = s.eta, eps0 = s.eps0, eps1 = s.eps1, iterations = s.iterations;
    } else {
        const auto bundle = make_functional(config.functional, n_states).smoothness(n_states);
        const auto s = schedule_smooth(config.eps, bundle.beta, bundle.bound);
        eta = s.eta, eps0 = s.eps0, eps1 = s.eps1, iterations = s.iterations;
    }
    DriverConfig& drv = config.driver;
    if (!given.eta) drv.eta = eta;
    if (!given.eps0) drv.eps0 = eps0;
    if (!given.eps1) drv.eps1 = eps1;
    if (!given.iterations) {
        if (iterations > INT_MAX) {
            throw ConfigError(source + ": driver.schedule: scheduled iteration count " + std::to_string(iterations) +
                              " is too large; set driver.iterations");
        }
        drv.iterations = static_cast<int>(iterations);
    }
}

} // namespace

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string_view to_string(Schedule schedule) {
    switch (schedule) {
    case Schedule::Manual: return "manual";
    case Schedule::Smooth: return "smooth";
    case Schedule::Entropy: return "entropy";
    }
    return "manual";
}

RewardFunctional make_functional(const FunctionalSpec& spec, int n_states) {
    auto target = [&]() {
        if (spec.target.kind == TargetSpec::Kind::Uniform) return StateDistribution::uniform(n_states);
        if (static_cast<int>(spec.target.values.size()) != n_states) {
            throw std::invalid_argument("functional.target has " + std::to_string(spec.target.values.size()) +
                                        " entries, environment has " + std::to_string(n_states) + " states");
        }
        return StateDistribution(
            Eigen::Map<const Vector>(spec.target.values.data(), static_cast<Eigen::Index>(n_states)));
    };
    switch (spec.kind) {
    case FunctionalKind::SmoothedEntropy: return RewardFunctional::smoothed_entropy(spec.sigma);
    case FunctionalKind::KLToTarget: return RewardFunctional::kl_to_target(spec.sigma, target());
    case FunctionalKind::CrossEntropyToTarget: return RewardFunctional::cross_entropy_to_target(spec.sigma, target());
    }
    throw std::invalid_argument("unknown functional kind");
}

RunConfig parse_run_config(const std::string& text, const std::string& source,
                           const std::vector<std::string>& overrides, const std::filesystem::path& base_dir) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    if (root && !root.IsNull() && !root.IsMap()) throw ConfigError(source + ": top level must be a mapping");
    Context context{source, {}};
    for (const auto& o : overrides) {
        apply_override(root, o);
        context.overridden.insert(o.substr(0, o.find('=')));
    }

    RunConfig config;
    Section top(root, "", context);
    if (!top.has("env")) top.fail(root, "", "missing required field 'env'");
    config.env = parse_env(top.child("env"));
    if (config.env.kind == EnvKind::File) config.env.path = absolute_path(base_dir, config.env.path);

    const YAML::Node& croot = root;
    const bool sigma_given = croot["functional"] && croot["functional"].IsMap() && croot["functional"]["sigma"];
    config.functional = parse_functional(top.child("functional"));
    const auto given = parse_driver(top.child("driver"), config, base_dir);
    config.driver.seed = top.opt_unsigned("seed").value_or(0);

    {
        Section out = top.child("output");
        config.output_dir = out.opt_string("dir").value_or("");
        config.wall_time = out.opt_bool("wall_time").value_or(false);
        out.finish();
    }
    {
        Section oracle = top.child("oracle");
        if (auto n = oracle.raw("resolution")) {
            const double r = oracle.number(n, "resolution");
            const double steps = 1.0 / r;
            if (!(r > 0.0 && r <= 1.0) || std::abs(steps - std::round(steps)) > 1e-9 * steps) {
                oracle.fail(n, "resolution", "must be 1/k for a positive integer k");
            }
            config.oracle_resolution = r;
        }
        oracle.finish();
    }
    {
        Section sweep = top.child("sweep");
        if (auto n = sweep.raw("seeds")) {
            if (!n.IsSequence()) sweep.fail(n, "seeds", "expected a list of seeds");
            for (const auto& s : n) config.sweep.seeds.push_back(sweep.unsigned_integer(s, "seeds"));
        }
        if (auto n = sweep.raw("grid")) {
            if (!n.IsMap()) sweep.fail(n, "grid", "expected a mapping from dotted keys to value lists");
            for (auto it = n.begin(); it != n.end(); ++it) {
                const auto key = it->first.as<std::string>();
                if (!it->second.IsSequence()) sweep.fail(it->second, "grid." + key, "expected a list of values");
                std::vector<std::string> values;
                for (const auto& v : it->second) values.push_back(YAML::Dump(v));
                config.sweep.grid.emplace_back(key, std::move(values));
            }
        }
        sweep.finish();
    }
    top.finish();

    TabularMDP mdp = [&]() {
        try {
            return build(config.env);
        } catch (const std::exception& e) {
            throw ConfigError(source + ": env: " + e.what());
        }
    }();
    try {
        make_functional(config.functional, mdp.n_states());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(source + ": functional: " + e.what());
    }
    apply_schedule(config, given, sigma_given, mdp.n_states(), source);
    try {
        config.driver.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(source + ": driver: " + e.what());
    }
    return config;
}

RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    auto base = path.parent_path();
    if (base.empty()) base = ".";
    return parse_run_config(text, path.string(), overrides, base);
}

std::string config_to_yaml(const RunConfig& config) {
    YAML::Emitter out;
    const auto num = [](double v) { return format_double(v); };
    out << YAML::BeginMap;

    const EnvSpec& env = config.env;
    out << YAML::Key << "env" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << std::string(to_string(env.kind));
    out << YAML::Key << "gamma" << YAML::Value << num(env.gamma.value_or(default_gamma(env.kind)));
    out << YAML::Key << "d0" << YAML::Value;
    switch (env.d0.kind) {
    case InitialRule::Kind::Default: out << "default"; break;
    case InitialRule::Kind::Uniform: out << "uniform"; break;
    case InitialRule::Kind::State: out << env.d0.state; break;
    }
    auto cell = [&](const GridCell& c) { out << YAML::Flow << YAML::BeginSeq << c.x << c.y << YAML::EndSeq; };
    switch (env.kind) {
    case EnvKind::Figure1: break;
    case EnvKind::Chain:
        out << YAML::Key << "length" << YAML::Value << env.length;
        out << YAML::Key << "slip" << YAML::Value << num(env.slip);
        break;
    case EnvKind::Gridworld:
        out << YAML::Key << "width" << YAML::Value << env.width;
        out << YAML::Key << "height" << YAML::Value << env.height;
        out << YAML::Key << "slip" << YAML::Value << num(env.slip);
        out << YAML::Key << "walls" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (const auto& w : env.walls) cell(w);
        out << YAML::EndSeq;
        out << YAML::Key << "start" << YAML::Value;
        cell(env.start);
        break;
    case EnvKind::Random:
        out << YAML::Key << "n_states" << YAML::Value << env.n_states;
        out << YAML::Key << "n_actions" << YAML::Value << env.n_actions;
        out << YAML::Key << "seed" << YAML::Value << env.seed;
        out << YAML::Key << "dirichlet_alpha" << YAML::Value << num(env.dirichlet_alpha);
        break;
    case EnvKind::MountainCar:
        out << YAML::Key << "position_bins" << YAML::Value << env.position_bins;
        out << YAML::Key << "velocity_bins" << YAML::Value << env.velocity_bins;
        out << YAML::Key << "max_substeps" << YAML::Value << env.max_substeps;
        break;
    case EnvKind::File:
        out << YAML::Key << "path" << YAML::Value << YAML::DoubleQuoted << env.path;
        break;
    }
    out << YAML::EndMap;

    const FunctionalSpec& f = config.functional;
    out << YAML::Key << "functional" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << std::string(to_string(f.kind));
    out << YAML::Key << "sigma" << YAML::Value << num(f.sigma);
    if (f.target.kind == TargetSpec::Kind::Uniform) {
        out << YAML::Key << "target" << YAML::Value << "uniform";
    } else if (f.target.kind == TargetSpec::Kind::Explicit) {
        out << YAML::Key << "target" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (double v : f.target.values) out << num(v);
        out << YAML::EndSeq;
    }
    out << YAML::EndMap;

    const DriverConfig& d = config.driver;
    out << YAML::Key << "driver" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "schedule" << YAML::Value << std::string(to_string(config.schedule));
    out << YAML::Key << "eps" << YAML::Value << num(config.eps);
    out << YAML::Key << "mode" << YAML::Value << std::string(to_string(d.mode));
    out << YAML::Key << "eta" << YAML::Value << num(d.eta);
    out << YAML::Key << "iterations" << YAML::Value << d.iterations;
    out << YAML::Key << "eps0" << YAML::Value << num(d.eps0);
    out << YAML::Key << "eps1" << YAML::Value << num(d.eps1);
    out << YAML::Key << "delta" << YAML::Value << num(d.delta);
    if (d.plan_m) out << YAML::Key << "plan_m" << YAML::Value << *d.plan_m;
    if (d.plan_n) out << YAML::Key << "plan_n" << YAML::Value << *d.plan_n;
    if (d.plan_t0) out << YAML::Key << "plan_t0" << YAML::Value << *d.plan_t0;
    if (d.density_m) out << YAML::Key << "density_m" << YAML::Value << *d.density_m;
    if (d.density_t0) out << YAML::Key << "density_t0" << YAML::Value << *d.density_t0;
    if (!config.counts_from.empty()) {
        out << YAML::Key << "counts_from" << YAML::Value << YAML::DoubleQuoted << config.counts_from;
    }
    out << YAML::EndMap;

    out << YAML::Key << "seed" << YAML::Value << d.seed;
    out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
    if (!config.output_dir.empty()) {
        out << YAML::Key << "dir" << YAML::Value << YAML::DoubleQuoted << config.output_dir;
    }
    out << YAML::Key << "wall_time" << YAML::Value << config.wall_time;
    out << YAML::EndMap;
    out << YAML::Key << "oracle" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "resolution" << YAML::Value << num(config.oracle_resolution);
    out << YAML::EndMap;

    if (!config.sweep.seeds.empty() || !config.sweep.grid.empty()) {
        out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
        if (!config.sweep.seeds.empty()) {
            out << YAML::Key << "seeds" << YAML::Value << YAML::Flow << YAML::BeginSeq;
            for (auto s : config.sweep.seeds) out << s;
            out << YAML::EndSeq;
        }
        if (!config.sweep.grid.empty()) {
            out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
            for (const auto& [key, values] : config.sweep.grid) {
                out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
                for (const auto& v : values) out << YAML::Load(v);
                out << YAML::EndSeq;
            }
            out << YAML::EndMap;
        }
        out << YAML::EndMap;
    }
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

} // namespace maxent
