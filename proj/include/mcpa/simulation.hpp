#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mcpa/power_model.hpp"
#include "mcpa/relax_solver.hpp"
#include "mcpa/rng.hpp"

namespace mcpa {

enum class ProfileKind { fixed, uniform, trunc_gaussian };

// How the Gaussian profile's spread constant is read: as the variance
// (default) or directly as the standard deviation.
enum class GaussianSpread { variance, stddev };

/// Per-carrier output power distribution for one cell of the sweep.
/// Active draws land in (0, p_max/capacity]: fixed at p_max/(2K), uniform
/// over the support, or a Gaussian with mean p_max/(2K) and spread constant
/// p_max/(4K) truncated to the support.
struct ProfileSpec {
    ProfileKind kind = ProfileKind::fixed;
    double p_nonactive = 0.0;  // probability a carrier sleeps this slot
    double p_max = 0.0;
    int capacity = 1;
    GaussianSpread spread = GaussianSpread::variance;
};

// Each carrier is zero with probability p_nonactive, otherwise drawn from
// the profile. Draw order is carrier-major on the given stream, so a slot's
// powers are a pure function of (stream seed, spec, n_carriers).
std::vector<double> sample_slot_powers(const ProfileSpec& spec, int n_carriers, Rng& rng);

enum class Algorithm { static_map, dynamic, exhaustive };

const char* to_string(ProfileKind kind);
const char* to_string(Algorithm algorithm);

struct ExperimentConfig {
    std::string name = "exp";
    PowerModelParams params;
    int n_carriers = 0;
    int n_pa = 0;
    int capacity = 0;
    long slots = 10000;
    std::vector<double> p_grid;
    std::vector<ProfileKind> profiles;
    std::vector<Algorithm> algorithms;
    std::uint64_t seed = 1;
    GaussianSpread gaussian_spread = GaussianSpread::variance;
    double profile_p_max = 0.0;  // profile support scale; 0 means params.p_max
    SolverOptions solver;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// One (profile, p_nonactive, algorithm) cell of the sweep.
struct CellResult {
    ProfileKind profile = ProfileKind::fixed;
    double p_nonactive = 0.0;
    Algorithm algorithm = Algorithm::static_map;
    double mean_power_w = 0.0;
    double stderr_w = 0.0;
    // NaN when the reference algorithm is missing or the gain denominator
    // is not positive.
    double saving_vs_static = 0.0;
    double fraction_of_optimal_gain = 0.0;
};

struct AggregateMetrics {
    std::string experiment;
    long slots = 0;
    std::uint64_t seed = 0;
    std::vector<CellResult> cells;  // profile-major, then p, then algorithm
};

// Runs the sweep. Every slot samples one power vector from the stream
// derived from (seed, slot) and evaluates it with every requested algorithm,
// so algorithms are compared on identical inputs. Deterministic for a fixed
// config; propagates oracle errors.
AggregateMetrics run_experiment(const ExperimentConfig& config);

// CSV with header
// experiment,profile,p_nonactive,algorithm,mean_power_w,stderr_w,
// saving_vs_static,fraction_of_optimal_gain,slots,seed
// one row per cell, floats with 6 significant digits.
void write_csv(const AggregateMetrics& metrics, std::ostream& out);

} // namespace mcpa
