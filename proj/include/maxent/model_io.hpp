#pragma once

#include "maxent/mdp.hpp"
#include "maxent/sample_oracles.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace maxent {

/// Malformed or invalid file content. The message names the offending field or entry.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// MDP file (JSON):
//   { "n_states": N, "n_actions": A, "gamma": g, "d0": [...],
//     "transition": [[s, a, s_next, p], ...] }   unlisted entries are 0
std::string mdp_to_json(const TabularMDP& mdp);
TabularMDP mdp_from_json(const std::string& text);
void save_mdp_file(const TabularMDP& mdp, const std::filesystem::path& path);
TabularMDP load_mdp_file(const std::filesystem::path& path);

// Counts snapshot (JSON): { "n_states": N, "n_actions": A, "counts": [[s, a, s_next, c], ...] }
std::string counts_to_json(const TransitionCounts& counts);
TransitionCounts counts_from_json(const std::string& text);

// Mixture (JSON): { "components": [ { "weight": w, "policy": [[pi(0|s), ...], ...] }, ... ] }
std::string mixture_to_json(const MixturePolicy& mixture);
MixturePolicy mixture_from_json(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
/// Writes through a temporary sibling and renames it into place.
void write_text_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace maxent
