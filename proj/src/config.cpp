#include "mcpa/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "mcpa/errors.hpp"

namespace mcpa {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

[[noreturn]] void fail(int line, const std::string& what) {
    throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

double to_double(std::string_view text, int line) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        fail(line, "expected a number, got '" + std::string(text) + "'");
    }
    return value;
}

template <typename Int>
Int to_int(std::string_view text, int line) {
    Int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        fail(line, "expected an integer, got '" + std::string(text) + "'");
    }
    return value;
}

template <typename Fn>
void for_each_item(std::string_view list, Fn&& fn) {
    size_t start = 0;
    while (start <= list.size()) {
        const size_t comma = list.find(',', start);
        const std::string_view item = trim(list.substr(
            start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!item.empty()) fn(item);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
}

ProfileKind parse_profile(std::string_view name, int line) {
    if (name == "fixed") return ProfileKind::fixed;
    if (name == "uniform") return ProfileKind::uniform;
    if (name == "truncgauss") return ProfileKind::trunc_gaussian;
    fail(line, "unknown profile '" + std::string(name) + "'");
}

Algorithm parse_algorithm(std::string_view name, int line) {
    if (name == "static") return Algorithm::static_map;
    if (name == "dynamic") return Algorithm::dynamic;
    if (name == "exhaustive") return Algorithm::exhaustive;
    fail(line, "unknown algorithm '" + std::string(name) + "'");
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

} // namespace

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    bool explicit_params = false;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view text = trim(raw);
        const size_t hash = text.find('#');
        if (hash != std::string_view::npos) text = trim(text.substr(0, hash));
        if (text.empty()) continue;

        const size_t eq = text.find('=');
        if (eq == std::string_view::npos) fail(line, "expected 'key = value'");
        const std::string_view key = trim(text.substr(0, eq));
        const std::string_view value = trim(text.substr(eq + 1));
        if (key.empty()) fail(line, "empty key");

        if (key == "experiment") {
            cfg.experiment = std::string(value);
        } else if (key == "preset") {
            if (!is_preset_name(value)) fail(line, "unknown preset '" + std::string(value) + "'");
            cfg.preset = std::string(value);
        } else if (key == "alpha") {
            cfg.params.alpha = to_double(value, line);
            explicit_params = true;
        } else if (key == "beta") {
            cfg.params.beta = to_double(value, line);
            explicit_params = true;
        } else if (key == "gamma") {
            cfg.params.gamma = to_double(value, line);
            explicit_params = true;
        } else if (key == "p_th") {
            cfg.params.p_th = to_double(value, line);
            explicit_params = true;
        } else if (key == "p_max") {
            cfg.params.p_max = to_double(value, line);
            explicit_params = true;
        } else if (key == "p_sta") {
            cfg.params.p_sta = to_double(value, line);
            explicit_params = true;
        } else if (key == "p_slp") {
            cfg.params.p_slp = to_double(value, line);
            explicit_params = true;
        } else if (key == "variant") {
            if (value == "doherty") {
                cfg.params.variant = PaVariant::doherty;
            } else if (value == "classab") {
                cfg.params.variant = PaVariant::class_ab;
            } else {
                fail(line, "variant must be doherty or classab");
            }
            explicit_params = true;
        } else if (key == "n_c") {
            cfg.n_carriers = to_int<int>(value, line);
        } else if (key == "n_pa") {
            cfg.n_pa = to_int<int>(value, line);
        } else if (key == "k") {
            cfg.capacity = to_int<int>(value, line);
        } else if (key == "slots") {
            cfg.slots = to_int<long>(value, line);
        } else if (key == "seed") {
            cfg.seed = to_int<std::uint64_t>(value, line);
        } else if (key == "p_grid") {
            cfg.p_grid.clear();
            for_each_item(value, [&](std::string_view item) { cfg.p_grid.push_back(to_double(item, line)); });
        } else if (key == "profiles") {
            cfg.profiles.clear();
            for_each_item(value, [&](std::string_view item) { cfg.profiles.push_back(parse_profile(item, line)); });
        } else if (key == "algorithms") {
            cfg.algorithms.clear();
            for_each_item(value, [&](std::string_view item) { cfg.algorithms.push_back(parse_algorithm(item, line)); });
        } else if (key == "profile_p_max") {
            cfg.profile_p_max = to_double(value, line);
        } else if (key == "gaussian_spread") {
            if (value == "variance") {
                cfg.gaussian_spread = GaussianSpread::variance;
            } else if (value == "stddev") {
                cfg.gaussian_spread = GaussianSpread::stddev;
            } else {
                fail(line, "gaussian_spread must be variance or stddev");
            }
        } else if (key == "out") {
            cfg.out = std::string(value);
        } else {
            fail(line, "unknown key '" + std::string(key) + "'");
        }
    }
    if (!cfg.preset.empty() && explicit_params) {
        throw ConfigError("config: give either preset= or explicit model parameters, not both");
    }
    if (cfg.preset.empty() && !explicit_params) {
        throw ConfigError("config: missing model parameters (preset= or alpha=..p_slp=)");
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "experiment = " << cfg.experiment << '\n';
    if (!cfg.preset.empty()) {
        out << "preset = " << cfg.preset << '\n';
    } else {
        out << "alpha = " << format_double(cfg.params.alpha) << '\n';
        out << "beta = " << format_double(cfg.params.beta) << '\n';
        out << "gamma = " << format_double(cfg.params.gamma) << '\n';
        out << "p_th = " << format_double(cfg.params.p_th) << '\n';
        out << "p_max = " << format_double(cfg.params.p_max) << '\n';
        out << "p_sta = " << format_double(cfg.params.p_sta) << '\n';
        out << "p_slp = " << format_double(cfg.params.p_slp) << '\n';
        out << "variant = " << (cfg.params.variant == PaVariant::doherty ? "doherty" : "classab")
            << '\n';
    }
    out << "n_c = " << cfg.n_carriers << '\n';
    out << "n_pa = " << cfg.n_pa << '\n';
    out << "k = " << cfg.capacity << '\n';
    out << "slots = " << cfg.slots << '\n';
    out << "p_grid = ";
    for (size_t i = 0; i < cfg.p_grid.size(); ++i) {
        if (i > 0) out << ',';
        out << format_double(cfg.p_grid[i]);
    }
    out << '\n';
    out << "profiles = ";
    for (size_t i = 0; i < cfg.profiles.size(); ++i) {
        if (i > 0) out << ',';
        out << to_string(cfg.profiles[i]);
    }
    out << '\n';
    out << "algorithms = ";
    for (size_t i = 0; i < cfg.algorithms.size(); ++i) {
        if (i > 0) out << ',';
        out << to_string(cfg.algorithms[i]);
    }
    out << '\n';
    out << "seed = " << cfg.seed << '\n';
    out << "gaussian_spread = "
        << (cfg.gaussian_spread == GaussianSpread::variance ? "variance" : "stddev") << '\n';
    if (cfg.profile_p_max > 0.0) out << "profile_p_max = " << format_double(cfg.profile_p_max) << '\n';
    if (!cfg.out.empty()) out << "out = " << cfg.out << '\n';
    return out.str();
}

ExperimentConfig to_experiment_config(const RunConfig& cfg) {
    ExperimentConfig exp;
    exp.name = cfg.experiment;
    exp.params = cfg.preset.empty() ? cfg.params : preset(cfg.preset);
    validate(exp.params);
    exp.n_carriers = cfg.n_carriers;
    exp.n_pa = cfg.n_pa;
    exp.capacity = cfg.capacity;
    exp.slots = cfg.slots;
    exp.p_grid = cfg.p_grid;
    exp.profiles = cfg.profiles;
    exp.algorithms = cfg.algorithms;
    exp.seed = cfg.seed;
    exp.gaussian_spread = cfg.gaussian_spread;
    exp.profile_p_max = cfg.profile_p_max;
    return exp;
}

} // namespace mcpa
