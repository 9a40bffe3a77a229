#pragma once

#include <cstdint>
#include <vector>

#include "mcpa/power_model.hpp"
#include "mcpa/problem.hpp"

namespace mcpa {

struct SolverOptions {
    double tol = 1e-8;          // first-order stationarity tolerance
    int max_iters = 10000;      // iteration cap across one start
    int restarts = 5;           // perturbed restarts, best-of kept
    std::uint64_t seed = 1;     // seeds the restart perturbations
};

/// The active-only problem: carriers re-indexed to 0..n_ac-1, the first
/// n_active_pas amplifiers designated to stay awake, and the quadratic
/// surrogate of the per-PA cost.
struct ReducedProblem {
    std::vector<double> powers_active;   // every entry > 0
    int n_active_pas = 0;
    int capacity = 0;
    std::vector<int> carrier_index_map;  // reduced -> original carrier
    std::vector<int> pa_index_map;       // reduced -> original PA
    QuadraticCoeffs surrogate;
    PowerModelParams params;             // kept for true-cost tie decisions

    int n_active() const { return static_cast<int>(powers_active.size()); }
};

/// Real-valued assignment over the transportation polytope
/// { rows sum to 1, column sums <= K, entries in [0,1] }, row-major.
struct RelaxedSolution {
    std::vector<double> values;  // n_active x n_active_pas
    int rows = 0;
    int cols = 0;
    double objective = 0.0;      // surrogate value at `values`
    int iterations = 0;          // linear-oracle steps summed over restarts
    bool converged = false;      // stationarity reached on the kept restart

    double at(int i, int j) const {
        return values[static_cast<size_t>(i) * static_cast<size_t>(cols) + static_cast<size_t>(j)];
    }
};

// Throws std::invalid_argument when the partition has no active carrier
// (callers short-circuit: everything sleeps at n_pa * p_slp).
ReducedProblem build_reduced(const MappingInstance& instance, const ActivePartition& partition,
                             const PowerModelParams& params);

// Surrogate cost summed over the active amplifiers. `values` is a row-major
// n_active x n_active_pas table inside the unit box.
double surrogate_objective(const ReducedProblem& reduced, const std::vector<double>& values);

// d(surrogate)/d(values[i][j]) = p_i * (f1 + f2 * (load_j - p_mid)).
std::vector<double> surrogate_gradient(const ReducedProblem& reduced,
                                       const std::vector<double>& values);

// Conditional-gradient descent of the surrogate over the transportation
// polytope. Each linear subproblem is solved exactly (min-cost assignment
// over PA slots), so iterates stay feasible and land on vertices. The
// surrogate is concave for realistic parameters, which makes this a
// monotone vertex descent; only a stationary point is guaranteed. Restarts
// perturb the uniform start; the best objective wins, lowest restart index
// on ties. Non-convergence is reported via the flag, not an error.
RelaxedSolution solve_relaxed(const ReducedProblem& reduced, const SolverOptions& options = {});

// Sorting-based projection to a binary mapping: repeatedly commit the
// largest remaining value to its PA when capacity allows, else zero that
// entry. Ties pick the lowest carrier then lowest PA index. A carrier whose
// row reaches all-zero before commitment is placed greedily on the spare-
// capacity PA with the smallest true input-power increase.
MappingMatrix round_by_sorting(const ReducedProblem& reduced, const RelaxedSolution& relaxed);

// Full pipeline for one instance: partition, reduce, solve, round, lift the
// result back to original indices, repair any load above p_max by moving the
// smallest carrier off the overloaded PA, and spread inactive carriers
// round-robin over the remaining capacity. Output always passes is_feasible;
// throws OverloadError only when no repair move exists.
MappingMatrix dynamic_map(const MappingInstance& instance, const PowerModelParams& params,
                          const SolverOptions& options = {});

} // namespace mcpa
