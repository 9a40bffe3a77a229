#include "mcpa/relax_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mcpa/errors.hpp"
#include "mcpa/rng.hpp"

namespace mcpa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Exact min-cost square assignment (shortest augmenting paths with
// potentials, O(n^3)). cost is n x n row-major; returns column per row.
// Handles negative costs; ties follow scan order, so the result is
// deterministic.
std::vector<int> min_cost_assignment(const std::vector<double>& cost, int n) {
    std::vector<double> u(static_cast<size_t>(n) + 1, 0.0);
    std::vector<double> v(static_cast<size_t>(n) + 1, 0.0);
    std::vector<int> match(static_cast<size_t>(n) + 1, 0);  // column -> row
    std::vector<int> way(static_cast<size_t>(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<size_t>(n) + 1, kInf);
        std::vector<char> used(static_cast<size_t>(n) + 1, 0);
        do {
            used[static_cast<size_t>(j0)] = 1;
            const int i0 = match[static_cast<size_t>(j0)];
            int j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) continue;
                const double cur = cost[static_cast<size_t>(i0 - 1) * static_cast<size_t>(n) +
                                        static_cast<size_t>(j - 1)] -
                                   u[static_cast<size_t>(i0)] - v[static_cast<size_t>(j)];
                if (cur < minv[static_cast<size_t>(j)]) {
                    minv[static_cast<size_t>(j)] = cur;
                    way[static_cast<size_t>(j)] = j0;
                }
                if (minv[static_cast<size_t>(j)] < delta) {
                    delta = minv[static_cast<size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) {
                    u[static_cast<size_t>(match[static_cast<size_t>(j)])] += delta;
                    v[static_cast<size_t>(j)] -= delta;
                } else {
                    minv[static_cast<size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<size_t>(j0)];
            match[static_cast<size_t>(j0)] = match[static_cast<size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_to_col(static_cast<size_t>(n), -1);
    for (int j = 1; j <= n; ++j) {
        if (match[static_cast<size_t>(j)] != 0) {
            row_to_col[static_cast<size_t>(match[static_cast<size_t>(j)] - 1)] = j - 1;
        }
    }
    return row_to_col;
}

// Integral minimizer of <w, x> over { rows sum 1, col sums <= K, box }:
// expand every PA into K unit slots and assign exactly. The polytope is the
// LP relaxation of this assignment, and its vertices are integral, so the
// slot optimum is the LP optimum.
std::vector<int> transport_vertex(const std::vector<double>& w, int n_ac, int n_as, int capacity) {
    const int slots = n_as * capacity;
    std::vector<double> cost(static_cast<size_t>(slots) * static_cast<size_t>(slots), 0.0);
    for (int i = 0; i < n_ac; ++i) {
        for (int s = 0; s < slots; ++s) {
            cost[static_cast<size_t>(i) * static_cast<size_t>(slots) + static_cast<size_t>(s)] =
                w[static_cast<size_t>(i) * static_cast<size_t>(n_as) +
                  static_cast<size_t>(s / capacity)];
        }
    }
    const std::vector<int> col = min_cost_assignment(cost, slots);
    std::vector<int> pa(static_cast<size_t>(n_ac));
    for (int i = 0; i < n_ac; ++i) pa[static_cast<size_t>(i)] = col[static_cast<size_t>(i)] / capacity;
    return pa;
}

std::vector<double> vertex_table(const std::vector<int>& pa, int n_ac, int n_as) {
    std::vector<double> x(static_cast<size_t>(n_ac) * static_cast<size_t>(n_as), 0.0);
    for (int i = 0; i < n_ac; ++i) {
        x[static_cast<size_t>(i) * static_cast<size_t>(n_as) + static_cast<size_t>(pa[static_cast<size_t>(i)])] = 1.0;
    }
    return x;
}

std::vector<double> pa_loads(const ReducedProblem& rp, const std::vector<double>& x) {
    const int n = rp.n_active();
    const int m = rp.n_active_pas;
    std::vector<double> load(static_cast<size_t>(m), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            load[static_cast<size_t>(j)] +=
                x[static_cast<size_t>(i) * static_cast<size_t>(m) + static_cast<size_t>(j)] *
                rp.powers_active[static_cast<size_t>(i)];
        }
    }
    return load;
}

} // namespace

ReducedProblem build_reduced(const MappingInstance& instance, const ActivePartition& partition,
                             const PowerModelParams& params) {
    if (partition.n_active_carriers == 0) {
        throw std::invalid_argument("build_reduced: no active carriers; every PA sleeps");
    }
    ReducedProblem rp;
    rp.capacity = instance.capacity();
    rp.n_active_pas = partition.n_active_pas;
    rp.carrier_index_map = partition.active_carriers;
    rp.pa_index_map.resize(static_cast<size_t>(partition.n_active_pas));
    for (int j = 0; j < partition.n_active_pas; ++j) rp.pa_index_map[static_cast<size_t>(j)] = j;
    rp.powers_active.reserve(partition.active_carriers.size());
    for (int idx : partition.active_carriers) rp.powers_active.push_back(instance.power(idx));
    if (params.variant == PaVariant::doherty) {
        rp.surrogate = taylor_coeffs(params);
    } else {
        // class_ab is linear above zero, so the "surrogate" is the branch
        // itself: q(x) = p_sta + alpha * x.
        rp.surrogate = QuadraticCoeffs{0.0, params.p_sta, params.alpha, 0.0};
    }
    rp.params = params;
    return rp;
}

double surrogate_objective(const ReducedProblem& rp, const std::vector<double>& values) {
    const std::vector<double> load = pa_loads(rp, values);
    const QuadraticCoeffs& q = rp.surrogate;
    double total = 0.0;
    for (double l : load) {
        const double d = l - q.p_mid;
        total += q.f0 + q.f1 * d + 0.5 * q.f2 * d * d;
    }
    return total;
}

std::vector<double> surrogate_gradient(const ReducedProblem& rp, const std::vector<double>& values) {
    const int n = rp.n_active();
    const int m = rp.n_active_pas;
    const std::vector<double> load = pa_loads(rp, values);
    const QuadraticCoeffs& q = rp.surrogate;
    std::vector<double> grad(static_cast<size_t>(n) * static_cast<size_t>(m));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            grad[static_cast<size_t>(i) * static_cast<size_t>(m) + static_cast<size_t>(j)] =
                rp.powers_active[static_cast<size_t>(i)] *
                (q.f1 + q.f2 * (load[static_cast<size_t>(j)] - q.p_mid));
        }
    }
    return grad;
}

RelaxedSolution solve_relaxed(const ReducedProblem& rp, const SolverOptions& options) {
    const int n = rp.n_active();
    const int m = rp.n_active_pas;
    const int capacity = rp.capacity;
    if (n > m * capacity) {
        throw InfeasibleError("solve_relaxed: more active carriers than active PA capacity");
    }

    RelaxedSolution best;
    int total_iters = 0;
    const int restarts = std::max(1, options.restarts);
    for (int r = 0; r < restarts; ++r) {
        // Restart 0 is the plain uniform start; later restarts perturb it
        // with seeded noise and renormalize rows. A perturbed start whose
        // column sums break capacity is snapped to the vertex its first
        // full conditional-gradient step would reach anyway.
        std::vector<double> x(static_cast<size_t>(n) * static_cast<size_t>(m), 1.0 / m);
        if (r > 0) {
            Rng rng(derive_stream_seed(options.seed, static_cast<std::uint64_t>(r)));
            for (double& v : x) v = std::max(0.0, v + rng.uniform(-0.1, 0.1));
            for (int i = 0; i < n; ++i) {
                double row = 0.0;
                for (int j = 0; j < m; ++j) row += x[static_cast<size_t>(i * m + j)];
                for (int j = 0; j < m; ++j) {
                    x[static_cast<size_t>(i * m + j)] =
                        row > 0.0 ? x[static_cast<size_t>(i * m + j)] / row : 1.0 / m;
                }
            }
            std::vector<double> colsum(static_cast<size_t>(m), 0.0);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < m; ++j) colsum[static_cast<size_t>(j)] += x[static_cast<size_t>(i * m + j)];
            }
            if (std::ranges::any_of(colsum, [&](double c) { return c > capacity + 1e-12; })) {
                x = vertex_table(transport_vertex(surrogate_gradient(rp, x), n, m, capacity), n, m);
            }
        }

        bool converged = false;
        for (int it = 0; it < options.max_iters; ++it) {
            ++total_iters;
            const std::vector<double> grad = surrogate_gradient(rp, x);
            const std::vector<int> pa = transport_vertex(grad, n, m, capacity);

            double gdir = 0.0;  // <grad, s - x>, never positive
            for (int i = 0; i < n; ++i) {
                gdir += grad[static_cast<size_t>(i * m + pa[static_cast<size_t>(i)])];
                for (int j = 0; j < m; ++j) {
                    gdir -= grad[static_cast<size_t>(i * m + j)] * x[static_cast<size_t>(i * m + j)];
                }
            }

            // Curvature along the segment: f2 * sum_j (load_s - load_x)^2.
            const std::vector<double> load_x = pa_loads(rp, x);
            std::vector<double> dload(static_cast<size_t>(m), 0.0);
            for (int j = 0; j < m; ++j) dload[static_cast<size_t>(j)] = -load_x[static_cast<size_t>(j)];
            for (int i = 0; i < n; ++i) {
                dload[static_cast<size_t>(pa[static_cast<size_t>(i)])] += rp.powers_active[static_cast<size_t>(i)];
            }
            double h = 0.0;
            for (double d : dload) h += d * d;
            h *= rp.surrogate.f2;

            double step = 0.0;
            if (-gdir <= options.tol) {
                // Zero first-order gap. On a concave segment the far endpoint
                // can still strictly improve: equal PA loads (the uniform
                // start) make every vertex tie in the linear model.
                if (h >= 0.0 || gdir + 0.5 * h >= -options.tol) {
                    converged = true;
                    break;
                }
                step = 1.0;
            } else {
                // Exact line search of the quadratic on [0,1]. For h <= 0 it
                // is concave along the segment and gdir < 0, so the far
                // endpoint always wins.
                step = h > 0.0 ? std::clamp(-gdir / h, 0.0, 1.0) : 1.0;
            }
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < m; ++j) {
                    const size_t idx = static_cast<size_t>(i * m + j);
                    const double target = pa[static_cast<size_t>(i)] == j ? 1.0 : 0.0;
                    x[idx] += step * (target - x[idx]);
                }
            }
        }

        const double value = surrogate_objective(rp, x);
        if (r == 0 || value < best.objective) {
            best.values = std::move(x);
            best.objective = value;
            best.converged = converged;
        }
    }
    best.rows = n;
    best.cols = m;
    best.iterations = total_iters;
    return best;
}

MappingMatrix round_by_sorting(const ReducedProblem& rp, const RelaxedSolution& relaxed) {
    const int n = rp.n_active();
    const int m = rp.n_active_pas;
    const int capacity = rp.capacity;
    if (relaxed.rows != n || relaxed.cols != m) {
        throw ConfigError("round_by_sorting: solution dimensions do not match the problem");
    }

    std::vector<double> v(relaxed.values.size());
    for (size_t k = 0; k < v.size(); ++k) v[k] = std::max(relaxed.values[k], 0.0);

    std::vector<int> committed(static_cast<size_t>(n), -1);
    std::vector<int> counts(static_cast<size_t>(m), 0);
    std::vector<double> loads(static_cast<size_t>(m), 0.0);

    const auto commit = [&](int i, int j) {
        committed[static_cast<size_t>(i)] = j;
        counts[static_cast<size_t>(j)] += 1;
        loads[static_cast<size_t>(j)] += rp.powers_active[static_cast<size_t>(i)];
    };
    // Cost of adding power p to PA j, +inf once the true model has no value
    // there (rounding itself never enforces p_max; dynamic_map repairs).
    const auto true_increase = [&](int j, double p) {
        const double before = loads[static_cast<size_t>(j)];
        if (before > rp.params.p_max || before + p > rp.params.p_max) return kInf;
        return input_power(rp.params, before + p) - input_power(rp.params, before);
    };
    const auto fallback = [&](int i) {
        const double p = rp.powers_active[static_cast<size_t>(i)];
        int best_j = -1;
        double best_inc = kInf;
        for (int j = 0; j < m; ++j) {
            if (counts[static_cast<size_t>(j)] >= capacity) continue;
            const double inc = true_increase(j, p);
            if (best_j < 0 || inc < best_inc ||
                (inc == best_inc && loads[static_cast<size_t>(j)] < loads[static_cast<size_t>(best_j)])) {
                best_j = j;
                best_inc = inc;
            }
        }
        commit(i, best_j);  // spare capacity always exists: n <= m * capacity
    };

    int remaining = n;
    while (remaining > 0) {
        int bi = -1;
        int bj = -1;
        double bv = -1.0;
        for (int i = 0; i < n; ++i) {
            if (committed[static_cast<size_t>(i)] >= 0) continue;
            for (int j = 0; j < m; ++j) {
                if (v[static_cast<size_t>(i * m + j)] > bv) {
                    bv = v[static_cast<size_t>(i * m + j)];
                    bi = i;
                    bj = j;
                }
            }
        }
        if (counts[static_cast<size_t>(bj)] < capacity) {
            commit(bi, bj);
            --remaining;
        } else {
            v[static_cast<size_t>(bi * m + bj)] = 0.0;
            bool exhausted = true;
            for (int j = 0; j < m; ++j) {
                if (v[static_cast<size_t>(bi * m + j)] > 0.0) {
                    exhausted = false;
                    break;
                }
            }
            if (exhausted) {
                fallback(bi);
                --remaining;
            }
        }
    }
    return MappingMatrix::from_assignment(committed, m);
}

namespace {

void repair_overloads(MappingMatrix& full, const MappingInstance& instance,
                      const PowerModelParams& params) {
    const int n_pa = instance.n_pa();
    const int capacity = instance.capacity();
    while (true) {
        const std::vector<double> loads = full.loads(instance);
        std::vector<int> counts(static_cast<size_t>(n_pa), 0);
        for (int i = 0; i < full.n_carriers(); ++i) {
            for (int j = 0; j < n_pa; ++j) counts[static_cast<size_t>(j)] += full.get(i, j) ? 1 : 0;
        }
        int over = -1;
        for (int j = 0; j < n_pa; ++j) {
            if (loads[static_cast<size_t>(j)] > params.p_max) {
                over = j;
                break;
            }
        }
        if (over < 0) return;

        int carrier = -1;
        for (int i = 0; i < full.n_carriers(); ++i) {
            if (full.get(i, over) &&
                (carrier < 0 || instance.power(i) < instance.power(carrier))) {
                carrier = i;
            }
        }
        const double p = instance.power(carrier);
        int target = -1;
        double best_inc = kInf;
        for (int j = 0; j < n_pa; ++j) {
            if (j == over || counts[static_cast<size_t>(j)] >= capacity) continue;
            if (loads[static_cast<size_t>(j)] + p > params.p_max) continue;
            const double inc = input_power(params, loads[static_cast<size_t>(j)] + p) -
                               input_power(params, loads[static_cast<size_t>(j)]);
            if (inc < best_inc) {
                best_inc = inc;
                target = j;
            }
        }
        if (target < 0) {
            throw OverloadError("dynamic_map: PA load above p_max and no repair move exists");
        }
        full.set(carrier, over, false);
        full.set(carrier, target, true);
    }
}

void fill_inactive(MappingMatrix& full, const MappingInstance& instance,
                   const ActivePartition& partition) {
    const int n_pa = instance.n_pa();
    std::vector<int> counts(static_cast<size_t>(n_pa), 0);
    for (int i = 0; i < full.n_carriers(); ++i) {
        for (int j = 0; j < n_pa; ++j) counts[static_cast<size_t>(j)] += full.get(i, j) ? 1 : 0;
    }
    int cursor = 0;
    for (int i : partition.inactive_carriers) {
        int pa = -1;
        for (int t = 0; t < n_pa; ++t) {
            const int j = (cursor + t) % n_pa;
            if (counts[static_cast<size_t>(j)] < instance.capacity()) {
                pa = j;
                break;
            }
        }
        full.set(i, pa, true);  // capacity >= n_carriers guarantees a slot
        counts[static_cast<size_t>(pa)] += 1;
        cursor = (pa + 1) % n_pa;
    }
}

} // namespace

MappingMatrix dynamic_map(const MappingInstance& instance, const PowerModelParams& params,
                          const SolverOptions& options) {
    const ActivePartition partition = partition_active(instance);
    if (partition.n_active_carriers == 0) {
        return static_mapping(instance);  // everything sleeps; any pattern works
    }
    const ReducedProblem reduced = build_reduced(instance, partition, params);
    const RelaxedSolution relaxed = solve_relaxed(reduced, options);
    const MappingMatrix rounded = round_by_sorting(reduced, relaxed);

    MappingMatrix full(instance.n_carriers(), instance.n_pa());
    for (int r = 0; r < reduced.n_active(); ++r) {
        for (int j = 0; j < reduced.n_active_pas; ++j) {
            if (rounded.get(r, j)) {
                full.set(reduced.carrier_index_map[static_cast<size_t>(r)],
                         reduced.pa_index_map[static_cast<size_t>(j)], true);
            }
        }
    }
    repair_overloads(full, instance, params);
    fill_inactive(full, instance, partition);
    return full;
}

} // namespace mcpa
