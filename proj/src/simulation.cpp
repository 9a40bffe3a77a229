#include "mcpa/simulation.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "mcpa/errors.hpp"
#include "mcpa/oracle.hpp"

namespace mcpa {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void validate_profile(const ProfileSpec& spec) {
    if (!(spec.p_nonactive >= 0.0 && spec.p_nonactive <= 1.0)) {
        throw ConfigError("profile: p_nonactive must lie in [0,1]");
    }
    if (!(spec.p_max > 0.0)) throw ConfigError("profile: p_max must be > 0");
    if (spec.capacity < 1) throw ConfigError("profile: capacity must be >= 1");
}

double gaussian_sigma(const ProfileSpec& spec) {
    const double constant = spec.p_max / (4.0 * spec.capacity);
    return spec.spread == GaussianSpread::variance ? std::sqrt(constant) : constant;
}

} // namespace

std::vector<double> sample_slot_powers(const ProfileSpec& spec, int n_carriers, Rng& rng) {
    validate_profile(spec);
    const double upper = spec.p_max / spec.capacity;
    std::vector<double> powers(static_cast<size_t>(n_carriers), 0.0);
    for (int i = 0; i < n_carriers; ++i) {
        if (rng.bernoulli(spec.p_nonactive)) continue;  // carrier sleeps, exact zero
        double value = 0.0;
        switch (spec.kind) {
        case ProfileKind::fixed:
            value = upper / 2.0;
            break;
        case ProfileKind::uniform:
            do {
                value = rng.uniform(0.0, upper);
            } while (value <= 0.0);  // activity is decided by the gate alone
            break;
        case ProfileKind::trunc_gaussian: {
            const double mean = upper / 2.0;
            const double sigma = gaussian_sigma(spec);
            do {
                value = rng.gauss(mean, sigma);
            } while (!(value > 0.0 && value <= upper));
            break;
        }
        }
        powers[static_cast<size_t>(i)] = value;
    }
    return powers;
}

const char* to_string(ProfileKind kind) {
    switch (kind) {
    case ProfileKind::fixed: return "fixed";
    case ProfileKind::uniform: return "uniform";
    case ProfileKind::trunc_gaussian: return "truncgauss";
    }
    return "?";
}

const char* to_string(Algorithm algorithm) {
    switch (algorithm) {
    case Algorithm::static_map: return "static";
    case Algorithm::dynamic: return "dynamic";
    case Algorithm::exhaustive: return "exhaustive";
    }
    return "?";
}

namespace {

double evaluate(Algorithm algorithm, const MappingInstance& instance,
                const ExperimentConfig& config) {
    switch (algorithm) {
    case Algorithm::static_map:
        return total_input_power(instance, static_mapping(instance), config.params);
    case Algorithm::dynamic:
        return total_input_power(instance, dynamic_map(instance, config.params, config.solver),
                                 config.params);
    case Algorithm::exhaustive:
        return exhaustive_search(instance, config.params, /*prune_symmetry=*/true).best_cost;
    }
    throw ConfigError("unknown algorithm");
}

void validate_config(const ExperimentConfig& config) {
    validate(config.params);
    if (config.slots < 1) throw ConfigError("experiment: slots must be >= 1");
    if (config.n_carriers < 1) throw ConfigError("experiment: n_c must be >= 1");
    if (config.n_pa < 1 || config.capacity < 1) {
        throw ConfigError("experiment: n_pa and k must be >= 1");
    }
    if (config.n_carriers > config.n_pa * config.capacity) {
        throw ConfigError("experiment: more carriers than total PA capacity");
    }
    if (config.p_grid.empty()) throw ConfigError("experiment: p_grid is empty");
    for (double p : config.p_grid) {
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("experiment: p_grid values must lie in [0,1]");
    }
    if (config.profiles.empty()) throw ConfigError("experiment: profiles is empty");
    if (config.algorithms.empty()) throw ConfigError("experiment: algorithms is empty");
}

} // namespace

AggregateMetrics run_experiment(const ExperimentConfig& config) {
    validate_config(config);

    AggregateMetrics metrics;
    metrics.experiment = config.name;
    metrics.slots = config.slots;
    metrics.seed = config.seed;

    const size_t n_algos = config.algorithms.size();
    for (ProfileKind kind : config.profiles) {
        for (double p_nonactive : config.p_grid) {
            ProfileSpec spec;
            spec.kind = kind;
            spec.p_nonactive = p_nonactive;
            spec.p_max = config.profile_p_max > 0.0 ? config.profile_p_max : config.params.p_max;
            spec.capacity = config.capacity;
            spec.spread = config.gaussian_spread;

            std::vector<double> sum(n_algos, 0.0);
            std::vector<double> sumsq(n_algos, 0.0);
            for (long slot = 0; slot < config.slots; ++slot) {
                // One power vector per slot, shared by every algorithm; the
                // stream depends only on (seed, slot).
                Rng rng(derive_stream_seed(config.seed, static_cast<std::uint64_t>(slot)));
                const std::vector<double> powers =
                    sample_slot_powers(spec, config.n_carriers, rng);
                const MappingInstance instance(powers, config.n_pa, config.capacity);
                for (size_t a = 0; a < n_algos; ++a) {
                    const double cost = evaluate(config.algorithms[a], instance, config);
                    sum[a] += cost;
                    sumsq[a] += cost * cost;
                }
            }

            double mean_static = kNan;
            double mean_exhaustive = kNan;
            for (size_t a = 0; a < n_algos; ++a) {
                const double mean = sum[a] / static_cast<double>(config.slots);
                if (config.algorithms[a] == Algorithm::static_map) mean_static = mean;
                if (config.algorithms[a] == Algorithm::exhaustive) mean_exhaustive = mean;
            }
            for (size_t a = 0; a < n_algos; ++a) {
                CellResult cell;
                cell.profile = kind;
                cell.p_nonactive = p_nonactive;
                cell.algorithm = config.algorithms[a];
                cell.mean_power_w = sum[a] / static_cast<double>(config.slots);
                if (config.slots > 1) {
                    const double variance =
                        (sumsq[a] - sum[a] * sum[a] / static_cast<double>(config.slots)) /
                        static_cast<double>(config.slots - 1);
                    cell.stderr_w = std::sqrt(std::max(variance, 0.0) /
                                              static_cast<double>(config.slots));
                } else {
                    cell.stderr_w = 0.0;
                }
                cell.saving_vs_static = std::isnan(mean_static)
                                            ? kNan
                                            : (mean_static - cell.mean_power_w) / mean_static;
                const double gain_den = mean_static - mean_exhaustive;
                cell.fraction_of_optimal_gain =
                    (std::isnan(mean_static) || std::isnan(mean_exhaustive) || !(gain_den > 0.0))
                        ? kNan
                        : (mean_static - cell.mean_power_w) / gain_den;
                metrics.cells.push_back(cell);
            }
        }
    }
    return metrics;
}

namespace {

std::string fmt6(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return buf;
}

} // namespace

void write_csv(const AggregateMetrics& metrics, std::ostream& out) {
    out << "experiment,profile,p_nonactive,algorithm,mean_power_w,stderr_w,"
           "saving_vs_static,fraction_of_optimal_gain,slots,seed\n";
    for (const CellResult& cell : metrics.cells) {
        out << metrics.experiment << ',' << to_string(cell.profile) << ','
            << fmt6(cell.p_nonactive) << ',' << to_string(cell.algorithm) << ','
            << fmt6(cell.mean_power_w) << ',' << fmt6(cell.stderr_w) << ','
            << fmt6(cell.saving_vs_static) << ',' << fmt6(cell.fraction_of_optimal_gain) << ','
            << metrics.slots << ',' << metrics.seed << '\n';
    }
}

} // namespace mcpa
