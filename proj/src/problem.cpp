#include "mcpa/problem.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include "mcpa/errors.hpp"

namespace mcpa {

MappingInstance::MappingInstance(std::vector<double> powers, int n_pa, int capacity)
    : powers_(std::move(powers)), n_pa_(n_pa), capacity_(capacity) {
    if (n_pa_ < 1) throw ConfigError("instance: n_pa must be >= 1");
    if (capacity_ < 1) throw ConfigError("instance: capacity must be >= 1");
    for (double p : powers_) {
        if (!(p >= 0.0)) throw ConfigError("instance: carrier powers must be >= 0");
    }
    if (n_carriers() > n_pa_ * capacity_) {
        throw InfeasibleError("instance: more carriers than total PA capacity");
    }
}

MappingMatrix::MappingMatrix(int n_carriers, int n_pa)
    : n_carriers_(n_carriers), n_pa_(n_pa),
      cells_(static_cast<size_t>(n_carriers) * static_cast<size_t>(n_pa), 0) {}

MappingMatrix MappingMatrix::from_assignment(const std::vector<int>& pa_of_carrier, int n_pa) {
    MappingMatrix m(static_cast<int>(pa_of_carrier.size()), n_pa);
    for (int i = 0; i < m.n_carriers(); ++i) {
        m.set(i, pa_of_carrier[static_cast<size_t>(i)], true);
    }
    return m;
}

std::vector<int> MappingMatrix::assignment() const {
    std::vector<int> out(static_cast<size_t>(n_carriers_), -1);
    for (int i = 0; i < n_carriers_; ++i) {
        for (int j = 0; j < n_pa_; ++j) {
            if (get(i, j)) {
                if (out[static_cast<size_t>(i)] >= 0) {
                    throw InfeasibleError("assignment(): carrier mapped to several PAs");
                }
                out[static_cast<size_t>(i)] = j;
            }
        }
        if (out[static_cast<size_t>(i)] < 0) {
            throw InfeasibleError("assignment(): carrier mapped to no PA");
        }
    }
    return out;
}

std::vector<double> MappingMatrix::loads(const MappingInstance& instance) const {
    std::vector<double> load(static_cast<size_t>(n_pa_), 0.0);
    for (int i = 0; i < n_carriers_; ++i) {
        for (int j = 0; j < n_pa_; ++j) {
            if (get(i, j)) load[static_cast<size_t>(j)] += instance.power(i);
        }
    }
    return load;
}

FeasibilityReport is_feasible(const MappingInstance& instance, const MappingMatrix& mapping) {
    if (mapping.n_carriers() != instance.n_carriers() || mapping.n_pa() != instance.n_pa()) {
        throw ConfigError("is_feasible: mapping dimensions do not match the instance");
    }
    FeasibilityReport report;
    for (int i = 0; i < mapping.n_carriers(); ++i) {
        int row = 0;
        for (int j = 0; j < mapping.n_pa(); ++j) row += mapping.get(i, j) ? 1 : 0;
        if (row != 1) {
            report.violations.push_back({ConstraintViolation::Kind::row_sum, i, row});
        }
    }
    for (int j = 0; j < mapping.n_pa(); ++j) {
        int col = 0;
        for (int i = 0; i < mapping.n_carriers(); ++i) col += mapping.get(i, j) ? 1 : 0;
        if (col > instance.capacity()) {
            report.violations.push_back({ConstraintViolation::Kind::column_capacity, j, col});
        }
    }
    report.feasible = report.violations.empty();
    return report;
}

ActivePartition partition_active(const MappingInstance& instance) {
    ActivePartition part;
    for (int i = 0; i < instance.n_carriers(); ++i) {
        if (instance.power(i) > 0.0) {
            part.active_carriers.push_back(i);
        } else {
            part.inactive_carriers.push_back(i);
        }
    }
    part.n_active_carriers = static_cast<int>(part.active_carriers.size());
    part.n_active_pas =
        (part.n_active_carriers + instance.capacity() - 1) / instance.capacity();
    return part;
}

double total_input_power(const MappingInstance& instance, const MappingMatrix& mapping,
                         const PowerModelParams& params) {
    const FeasibilityReport report = is_feasible(instance, mapping);
    if (!report.feasible) {
        throw InfeasibleError("total_input_power: mapping violates assignment constraints");
    }
    const std::vector<double> load = mapping.loads(instance);
    double total = 0.0;
    for (double l : load) {
        if (l > params.p_max) {
            throw OverloadError("total_input_power: PA load above p_max");
        }
        total += input_power(params, l);
    }
    return total;
}

MappingMatrix static_mapping(const MappingInstance& instance) {
    MappingMatrix m(instance.n_carriers(), instance.n_pa());
    for (int i = 0; i < instance.n_carriers(); ++i) {
        m.set(i, i / instance.capacity(), true);
    }
    return m;
}

namespace {

double parse_double_or_throw(std::string_view text, const char* what) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(std::string("instance record: bad ") + what);
    }
    return value;
}

int parse_int_or_throw(std::string_view text, const char* what) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(std::string("instance record: bad ") + what);
    }
    return value;
}

} // namespace

MappingInstance parse_instance(std::string_view record) {
    int n_pa = -1;
    int capacity = -1;
    std::vector<double> powers;
    bool have_powers = false;

    size_t pos = 0;
    while (pos < record.size()) {
        while (pos < record.size() && record[pos] == ' ') ++pos;
        if (pos >= record.size()) break;
        const size_t end = record.find(' ', pos);
        const std::string_view token =
            record.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? record.size() : end + 1;

        const size_t eq = token.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("instance record: expected key=value tokens");
        }
        const std::string_view key = token.substr(0, eq);
        const std::string_view value = token.substr(eq + 1);
        if (key == "n_pa") {
            n_pa = parse_int_or_throw(value, "n_pa");
        } else if (key == "k") {
            capacity = parse_int_or_throw(value, "k");
        } else if (key == "powers") {
            have_powers = true;
            size_t start = 0;
            while (start <= value.size()) {
                const size_t comma = value.find(',', start);
                const std::string_view item = value.substr(
                    start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
                if (!item.empty()) powers.push_back(parse_double_or_throw(item, "carrier power"));
                if (comma == std::string_view::npos) break;
                start = comma + 1;
            }
        } else {
            throw ConfigError("instance record: unknown key '" + std::string(key) + "'");
        }
    }
    if (n_pa < 0 || capacity < 0 || !have_powers) {
        throw ConfigError("instance record: requires n_pa=, k=, powers=");
    }
    return MappingInstance(std::move(powers), n_pa, capacity);
}

std::string format_instance(const MappingInstance& instance) {
    std::ostringstream out;
    out << "n_pa=" << instance.n_pa() << " k=" << instance.capacity() << " powers=";
    char buf[32];
    for (int i = 0; i < instance.n_carriers(); ++i) {
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), instance.power(i));
        if (i > 0) out << ',';
        out << std::string_view(buf, static_cast<size_t>(ptr - buf));
    }
    return out.str();
}

} // namespace mcpa
