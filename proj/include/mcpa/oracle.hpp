#pragma once

#include <cstdint>

#include "mcpa/problem.hpp"

namespace mcpa {

struct OracleResult {
    MappingMatrix best_mapping;
    double best_cost = 0.0;
    std::int64_t mappings_examined = 0;  // feasible complete mappings evaluated
};

// Globally minimal total_input_power over all feasible mappings (capacity
// respected, every PA load <= p_max). Depth-first over carriers in index
// order, abandoning branches that exceed capacity or p_max; with
// prune_symmetry a carrier may open only the lowest-indexed still-empty PA,
// which enumerates each PA-relabeling class once.
//
// Ties keep the first mapping found, i.e. the lexicographically smallest
// assignment vector. Throws ResourceLimitError when n_pa^n_carriers > 1e8
// and pruning is off; throws OverloadError when no mapping fits under p_max.
OracleResult exhaustive_search(const MappingInstance& instance, const PowerModelParams& params,
                               bool prune_symmetry = true);

} // namespace mcpa
