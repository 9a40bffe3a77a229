#pragma once

#include <vector>

#include "mcpa/problem.hpp"
#include "mcpa/rng.hpp"

// Random instance with the given geometry: each carrier sleeps with
// probability p_zero, otherwise draws uniform in (0, p_max/capacity].
inline mcpa::MappingInstance random_instance(int n_carriers, int n_pa, int capacity,
                                             double p_max, double p_zero, mcpa::Rng& rng) {
    std::vector<double> powers(static_cast<size_t>(n_carriers), 0.0);
    for (double& p : powers) {
        if (rng.bernoulli(p_zero)) continue;
        double v = 0.0;
        while (v <= 0.0) v = rng.uniform(0.0, p_max / capacity);
        p = v;
    }
    return mcpa::MappingInstance(powers, n_pa, capacity);
}
