#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mcpa/config.hpp"
#include "mcpa/errors.hpp"
#include "mcpa/oracle.hpp"
#include "mcpa/relax_solver.hpp"
#include "mcpa/simulation.hpp"

namespace {

// Exit codes: 0 ok, 2 model domain error, 3 infeasible/overloaded instance,
// 4 enumeration resource limit, 5 bad config or parameters.
constexpr int kExitDomain = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitResource = 4;
constexpr int kExitConfig = 5;

struct ModelFlags {
    std::string preset;
    mcpa::PowerModelParams params;
    std::string variant = "doherty";
    bool explicit_params = false;
};

void add_model_flags(CLI::App* cmd, ModelFlags& flags) {
    cmd->add_option("--preset", flags.preset, "named parameter set: exp1, exp2 or exp3");
    const auto mark = [&flags](const std::string&) { flags.explicit_params = true; };
    cmd->add_option("--alpha", flags.params.alpha)->each(mark);
    cmd->add_option("--beta", flags.params.beta)->each(mark);
    cmd->add_option("--gamma", flags.params.gamma)->each(mark);
    cmd->add_option("--p-th", flags.params.p_th)->each(mark);
    cmd->add_option("--p-max", flags.params.p_max)->each(mark);
    cmd->add_option("--p-sta", flags.params.p_sta)->each(mark);
    cmd->add_option("--p-slp", flags.params.p_slp)->each(mark);
    cmd->add_option("--variant", flags.variant, "doherty or classab");
}

mcpa::PowerModelParams resolve_model(const ModelFlags& flags) {
    if (!flags.preset.empty() && flags.explicit_params) {
        throw mcpa::ConfigError("give either --preset or explicit model parameters, not both");
    }
    if (!flags.preset.empty()) return mcpa::preset(flags.preset);
    if (!flags.explicit_params) {
        throw mcpa::ConfigError("missing model: use --preset or explicit parameters");
    }
    mcpa::PowerModelParams params = flags.params;
    if (flags.variant == "doherty") {
        params.variant = mcpa::PaVariant::doherty;
    } else if (flags.variant == "classab") {
        params.variant = mcpa::PaVariant::class_ab;
    } else {
        throw mcpa::ConfigError("--variant must be doherty or classab");
    }
    mcpa::validate(params);
    return params;
}

std::string fmt6(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return buf;
}

int run_eval(const ModelFlags& flags, double p_out) {
    const mcpa::PowerModelParams params = resolve_model(flags);
    std::cout << "input_power_w=" << fmt6(mcpa::input_power(params, p_out)) << '\n';
    if (params.variant == mcpa::PaVariant::doherty && p_out > params.p_th &&
        p_out < params.p_max) {
        std::cout << "d1=" << fmt6(mcpa::d_input_power(params, p_out)) << '\n';
        std::cout << "d2=" << fmt6(mcpa::d2_input_power(params, p_out)) << '\n';
    }
    return 0;
}

int run_solve(const ModelFlags& flags, const std::string& algo, const std::string& record,
              const mcpa::SolverOptions& options, bool no_prune) {
    const mcpa::PowerModelParams params = resolve_model(flags);
    const mcpa::MappingInstance instance = mcpa::parse_instance(record);

    mcpa::MappingMatrix mapping(0, 0);
    if (algo == "static") {
        mapping = mcpa::static_mapping(instance);
    } else if (algo == "dynamic") {
        mapping = mcpa::dynamic_map(instance, params, options);
    } else if (algo == "exhaustive") {
        mapping = mcpa::exhaustive_search(instance, params, !no_prune).best_mapping;
    } else {
        throw mcpa::ConfigError("--algo must be static, dynamic or exhaustive");
    }

    const std::vector<int> assignment = mapping.assignment();
    std::cout << "assignment=";
    for (size_t i = 0; i < assignment.size(); ++i) {
        if (i > 0) std::cout << ',';
        std::cout << assignment[i];
    }
    std::cout << '\n';
    std::cout << "total_power_w=" << fmt6(mcpa::total_input_power(instance, mapping, params))
              << '\n';
    return 0;
}

int run_sweep(const std::string& config_path, const std::string& out_override,
              std::optional<long> slots_override, std::optional<std::uint64_t> seed_override) {
    mcpa::RunConfig cfg = mcpa::parse_config_file(config_path);
    if (slots_override) cfg.slots = *slots_override;
    if (seed_override) cfg.seed = *seed_override;
    if (!out_override.empty()) cfg.out = out_override;

    const mcpa::AggregateMetrics metrics = mcpa::run_experiment(mcpa::to_experiment_config(cfg));
    if (cfg.out.empty()) {
        mcpa::write_csv(metrics, std::cout);
    } else {
        std::ofstream out(cfg.out, std::ios::binary);
        if (!out) throw mcpa::ConfigError("cannot open output file: " + cfg.out);
        mcpa::write_csv(metrics, out);
        std::cerr << "wrote " << metrics.cells.size() << " rows to " << cfg.out << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"carrier-to-MCPA mapping: model evaluation, single-slot solvers, "
                 "and Monte Carlo sweeps"};
    app.require_subcommand(1);

    ModelFlags eval_model;
    double p_out = 0.0;
    CLI::App* eval = app.add_subcommand("eval", "evaluate the amplifier input-power model");
    add_model_flags(eval, eval_model);
    eval->add_option("--pout", p_out, "output power in watts")->required();

    ModelFlags solve_model;
    std::string algo = "dynamic";
    std::string record;
    mcpa::SolverOptions solver;
    CLI::App* solve = app.add_subcommand("solve", "map one instance record");
    add_model_flags(solve, solve_model);
    solve->add_option("--algo", algo, "static, dynamic or exhaustive");
    solve->add_option("record", record, "instance: \"n_pa=<int> k=<int> powers=<w,...>\"")
        ->required();
    solve->add_option("--tol", solver.tol, "stationarity tolerance");
    solve->add_option("--max-iters", solver.max_iters, "iteration cap per restart");
    solve->add_option("--restarts", solver.restarts, "perturbed restarts");
    solve->add_option("--seed", solver.seed, "restart perturbation seed");
    bool no_prune = false;
    solve->add_flag("--no-prune", no_prune, "disable symmetry pruning in exhaustive search");

    std::string config_path;
    std::string out_path;
    std::optional<long> slots_override;
    std::optional<std::uint64_t> seed_override;
    CLI::App* sweep = app.add_subcommand("sweep", "run a configured experiment to CSV");
    sweep->add_option("--config", config_path, "flat key = value config file")->required();
    sweep->add_option("--out", out_path, "CSV output path (overrides config)");
    sweep->add_option("--slots", slots_override, "slot count (overrides config)");
    sweep->add_option("--seed", seed_override, "stream seed (overrides config)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval->parsed()) return run_eval(eval_model, p_out);
        if (solve->parsed()) return run_solve(solve_model, algo, record, solver, no_prune);
        if (sweep->parsed()) return run_sweep(config_path, out_path, slots_override, seed_override);
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const mcpa::InfeasibleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const mcpa::OverloadError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const mcpa::ResourceLimitError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitResource;
    } catch (const mcpa::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
