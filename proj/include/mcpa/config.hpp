#pragma once

#include <iosfwd>
#include <string>

#include "mcpa/simulation.hpp"

namespace mcpa {

/// Parsed sweep configuration: flat `key = value` lines, `#` comments.
/// The model comes either from `preset` or from explicit parameter keys.
struct RunConfig {
    std::string experiment = "exp";
    std::string preset;          // empty means explicit params below
    PowerModelParams params;     // consulted only when preset is empty
    int n_carriers = 0;
    int n_pa = 0;
    int capacity = 0;
    long slots = 10000;
    std::vector<double> p_grid;
    std::vector<ProfileKind> profiles;
    std::vector<Algorithm> algorithms;
    std::uint64_t seed = 1;
    GaussianSpread gaussian_spread = GaussianSpread::variance;
    double profile_p_max = 0.0;  // profile support scale; 0 means the model's p_max
    std::string out;             // CSV path; empty means stdout

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Throws ConfigError naming the offending line number.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::string& path);

// Emits a text form that parses back to an identical RunConfig.
std::string serialize_config(const RunConfig& config);

// Resolves the preset and validates everything the sweep needs.
ExperimentConfig to_experiment_config(const RunConfig& config);

} // namespace mcpa
