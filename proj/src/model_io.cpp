#include "maxent/model_io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

namespace maxent {

using nlohmann::json;

namespace {

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
}

template <typename T>
T field(const json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) throw FormatError(std::string("missing field '") + name + "'");
    try {
        return j.at(name).get<T>();
    } catch (const json::exception&) {
        throw FormatError(std::string("field '") + name + "' has the wrong type");
    }
}

int checked_index(const json& entry, std::size_t pos, int limit, const std::string& what, std::size_t row) {
    if (!entry[pos].is_number_integer()) {
        throw FormatError(what + " of entry " + std::to_string(row) + " is not an integer");
    }
    const auto v = entry[pos].get<long long>();
    if (v < 0 || v >= limit) {
        throw FormatError(what + " " + std::to_string(v) + " of entry " + std::to_string(row) + " is out of range");
    }
    return static_cast<int>(v);
}

} // namespace

std::string mdp_to_json(const TabularMDP& mdp) {
    json j;
    j["n_states"] = mdp.n_states();
    j["n_actions"] = mdp.n_actions();
    j["gamma"] = mdp.gamma();
    j["d0"] = std::vector<double>(mdp.d0().data(), mdp.d0().data() + mdp.n_states());
    json transitions = json::array();
    for (int s = 0; s < mdp.n_states(); ++s) {
        for (int a = 0; a < mdp.n_actions(); ++a) {
            for (int next = 0; next < mdp.n_states(); ++next) {
                const double p = mdp.prob(next, s, a);
                if (p != 0.0) transitions.push_back({s, a, next, p});
            }
        }
    }
    j["transition"] = std::move(transitions);
    return j.dump(1) + "\n";
}

TabularMDP mdp_from_json(const std::string& text) {
    const json j = parse_json(text);
    const int n = field<int>(j, "n_states");
    const int k = field<int>(j, "n_actions");
    const double gamma = field<double>(j, "gamma");
    const auto d0_values = field<std::vector<double>>(j, "d0");
    if (n < 1) throw FormatError("n_states must be positive");
    if (k < 1) throw FormatError("n_actions must be positive");
    if (static_cast<int>(d0_values.size()) != n) {
        throw FormatError("d0 has " + std::to_string(d0_values.size()) + " entries, expected " + std::to_string(n));
    }
    if (!j.contains("transition") || !j["transition"].is_array()) throw FormatError("missing field 'transition'");

    std::vector<Matrix> transitions(static_cast<std::size_t>(k), Matrix::Zero(n, n));
    std::set<std::tuple<int, int, int>> seen;
    std::size_t row = 0;
    for (const auto& entry : j["transition"]) {
        if (!entry.is_array() || entry.size() != 4) {
            throw FormatError("transition entry " + std::to_string(row) + " is not [s, a, s_next, p]");
        }
        const int s = checked_index(entry, 0, n, "state", row);
        const int a = checked_index(entry, 1, k, "action", row);
        const int next = checked_index(entry, 2, n, "next state", row);
        if (!entry[3].is_number()) throw FormatError("probability of entry " + std::to_string(row) + " is not a number");
        const double p = entry[3].get<double>();
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
            throw FormatError("probability " + std::to_string(p) + " of entry " + std::to_string(row) +
                              " lies outside [0, 1]");
        }
        if (!seen.emplace(s, a, next).second) {
            throw FormatError("duplicate transition (" + std::to_string(s) + ", " + std::to_string(a) + ", " +
                              std::to_string(next) + ") at entry " + std::to_string(row));
        }
        transitions[static_cast<std::size_t>(a)](next, s) = p;
        ++row;
    }
    try {
        return TabularMDP(std::move(transitions), gamma,
                          Eigen::Map<const Vector>(d0_values.data(), static_cast<Eigen::Index>(n)));
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
}

void save_mdp_file(const TabularMDP& mdp, const std::filesystem::path& path) {
    write_text_file_atomic(path, mdp_to_json(mdp));
}

TabularMDP load_mdp_file(const std::filesystem::path& path) {
    try {
        return mdp_from_json(read_text_file(path));
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

std::string counts_to_json(const TransitionCounts& counts) {
    json j;
    j["n_states"] = counts.n_states();
    j["n_actions"] = counts.n_actions();
    json entries = json::array();
    for (int s = 0; s < counts.n_states(); ++s) {
        for (int a = 0; a < counts.n_actions(); ++a) {
            for (int next = 0; next < counts.n_states(); ++next) {
                const auto c = counts.count(next, s, a);
                if (c != 0) entries.push_back({s, a, next, c});
            }
        }
    }
    j["counts"] = std::move(entries);
    return j.dump() + "\n";
}

TransitionCounts counts_from_json(const std::string& text) {
    const json j = parse_json(text);
    const int n = field<int>(j, "n_states");
    const int k = field<int>(j, "n_actions");
    if (n < 1 || k < 1) throw FormatError("counts need positive n_states and n_actions");
    if (!j.contains("counts") || !j["counts"].is_array()) throw FormatError("missing field 'counts'");
    TransitionCounts counts(n, k);
    std::size_t row = 0;
    for (const auto& entry : j["counts"]) {
        if (!entry.is_array() || entry.size() != 4) {
            throw FormatError("counts entry " + std::to_string(row) + " is not [s, a, s_next, count]");
        }
        const int s = checked_index(entry, 0, n, "state", row);
        const int a = checked_index(entry, 1, k, "action", row);
        const int next = checked_index(entry, 2, n, "next state", row);
        if (!entry[3].is_number_unsigned() && !(entry[3].is_number_integer() && entry[3].get<long long>() >= 0)) {
            throw FormatError("count of entry " + std::to_string(row) + " is not a non-negative integer");
        }
        counts.record(s, a, next, entry[3].get<std::uint64_t>());
        ++row;
    }
    return counts;
}

std::string mixture_to_json(const MixturePolicy& mixture) {
    json components = json::array();
    for (std::size_t i = 0; i < mixture.size(); ++i) {
        const Matrix& probs = mixture.component(i).probs();
        json rows = json::array();
        for (Eigen::Index s = 0; s < probs.rows(); ++s) {
            std::vector<double> row(static_cast<std::size_t>(probs.cols()));
            for (Eigen::Index a = 0; a < probs.cols(); ++a) row[static_cast<std::size_t>(a)] = probs(s, a);
            rows.push_back(std::move(row));
        }
        components.push_back({{"weight", mixture.weights()[i]}, {"policy", std::move(rows)}});
    }
    json j;
    j["components"] = std::move(components);
    return j.dump(1) + "\n";
}

MixturePolicy mixture_from_json(const std::string& text) {
    const json j = parse_json(text);
    if (!j.contains("components") || !j["components"].is_array()) throw FormatError("missing field 'components'");
    std::vector<StationaryPolicy> components;
    std::vector<double> weights;
    for (const auto& c : j["components"]) {
        weights.push_back(field<double>(c, "weight"));
        const auto rows = field<std::vector<std::vector<double>>>(c, "policy");
        if (rows.empty() || rows.front().empty()) throw FormatError("empty policy matrix");
        Matrix probs(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
        for (std::size_t s = 0; s < rows.size(); ++s) {
            if (rows[s].size() != rows.front().size()) throw FormatError("ragged policy matrix");
            for (std::size_t a = 0; a < rows[s].size(); ++a) {
                probs(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(a)) = rows[s][a];
            }
        }
        try {
            components.emplace_back(std::move(probs));
        } catch (const std::invalid_argument& e) {
            throw FormatError(e.what());
        }
    }
    try {
        return MixturePolicy(std::move(components), std::move(weights));
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw std::runtime_error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace maxent
