#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mcpa/power_model.hpp"

namespace mcpa {

/// One slot's mapping problem: per-carrier output powers, the number of
/// amplifiers, and the per-amplifier carrier capacity K.
class MappingInstance {
public:
    // Throws ConfigError for negative powers or non-positive counts,
    // InfeasibleError when n_carriers > n_pa * capacity.
    MappingInstance(std::vector<double> powers, int n_pa, int capacity);

    int n_carriers() const { return static_cast<int>(powers_.size()); }
    int n_pa() const { return n_pa_; }
    int capacity() const { return capacity_; }
    const std::vector<double>& powers() const { return powers_; }
    double power(int carrier) const { return powers_[static_cast<size_t>(carrier)]; }

    friend bool operator==(const MappingInstance&, const MappingInstance&) = default;

private:
    std::vector<double> powers_;
    int n_pa_;
    int capacity_;
};

// One-line record `n_pa=<int> k=<int> powers=<w1,w2,...>`.
MappingInstance parse_instance(std::string_view record);
std::string format_instance(const MappingInstance& instance);

/// Binary carrier-to-PA assignment table c[i][j].
class MappingMatrix {
public:
    MappingMatrix(int n_carriers, int n_pa);
    // Builds the matrix with carrier i on PA pa_of_carrier[i].
    static MappingMatrix from_assignment(const std::vector<int>& pa_of_carrier, int n_pa);

    int n_carriers() const { return n_carriers_; }
    int n_pa() const { return n_pa_; }
    bool get(int carrier, int pa) const { return cells_[index(carrier, pa)] != 0; }
    void set(int carrier, int pa, bool value) { cells_[index(carrier, pa)] = value ? 1 : 0; }

    // PA index per carrier; requires every row to have exactly one entry set.
    std::vector<int> assignment() const;
    // Per-PA output power, accumulated in ascending carrier order.
    std::vector<double> loads(const MappingInstance& instance) const;

    friend bool operator==(const MappingMatrix&, const MappingMatrix&) = default;

private:
    size_t index(int carrier, int pa) const {
        return static_cast<size_t>(carrier) * static_cast<size_t>(n_pa_) + static_cast<size_t>(pa);
    }
    int n_carriers_;
    int n_pa_;
    std::vector<unsigned char> cells_;
};

struct ConstraintViolation {
    enum class Kind { row_sum, column_capacity };
    Kind kind;
    int index;  // carrier for row_sum, PA for column_capacity
    int count;  // offending sum
};

struct FeasibilityReport {
    bool feasible = false;
    std::vector<ConstraintViolation> violations;
};

// Checks row sums == 1 and column sums <= K. Throws ConfigError on a
// dimension mismatch between instance and mapping.
FeasibilityReport is_feasible(const MappingInstance& instance, const MappingMatrix& mapping);

/// Split of carriers into active (p > 0) and inactive, plus the number of
/// amplifiers that must stay awake to host the active ones.
struct ActivePartition {
    std::vector<int> active_carriers;    // ascending indices with p > 0
    std::vector<int> inactive_carriers;  // complement, ascending
    int n_active_carriers = 0;
    int n_active_pas = 0;                // ceil(n_active_carriers / capacity)
};

ActivePartition partition_active(const MappingInstance& instance);

// Sum of input_power over all amplifiers, sleeping ones included.
// Throws InfeasibleError for an infeasible mapping and OverloadError when a
// PA load exceeds p_max.
double total_input_power(const MappingInstance& instance, const MappingMatrix& mapping,
                         const PowerModelParams& params);

// Baseline block pattern: carrier i goes to PA i/K regardless of powers.
MappingMatrix static_mapping(const MappingInstance& instance);

} // namespace mcpa
