#include <cmath>

#include <doctest.h>

#include "fd_oracle.hpp"
#include "mcpa/errors.hpp"
#include "mcpa/oracle.hpp"
#include "mcpa/relax_solver.hpp"
#include "mcpa/rng.hpp"
#include "test_helpers.hpp"

using namespace mcpa;

namespace {

ReducedProblem reduced_for(const std::vector<double>& powers, int n_pa, int capacity,
                           const PowerModelParams& params) {
    const MappingInstance inst(powers, n_pa, capacity);
    return build_reduced(inst, partition_active(inst), params);
}

// Row-stochastic random table; columns intentionally unconstrained.
std::vector<double> random_row_stochastic(int rows, int cols, Rng& rng) {
    std::vector<double> v(static_cast<size_t>(rows) * static_cast<size_t>(cols));
    for (int i = 0; i < rows; ++i) {
        double sum = 0.0;
        for (int j = 0; j < cols; ++j) {
            const double u = rng.uniform01();
            v[static_cast<size_t>(i * cols + j)] = u;
            sum += u;
        }
        for (int j = 0; j < cols; ++j) v[static_cast<size_t>(i * cols + j)] /= sum;
    }
    return v;
}

} // namespace

TEST_SUITE("relax_solver") {

TEST_CASE("reduction drops sleeping carriers and re-indexes") {
    const PowerModelParams m = preset("exp1");
    const MappingInstance inst({20.0, 0.0, 20.0, 0.0}, 2, 2);
    const ReducedProblem rp = build_reduced(inst, partition_active(inst), m);
    CHECK(rp.powers_active == std::vector<double>{20.0, 20.0});
    CHECK(rp.n_active_pas == 1);
    CHECK(rp.carrier_index_map == std::vector<int>{0, 2});
    CHECK(rp.pa_index_map == std::vector<int>{0});
    CHECK(rp.surrogate.p_mid == 17.5);

    const MappingInstance all_on({3.0, 4.0}, 2, 2);
    const ReducedProblem identity = build_reduced(all_on, partition_active(all_on), m);
    CHECK(identity.carrier_index_map == std::vector<int>{0, 1});

    const MappingInstance none({0.0, 0.0}, 2, 2);
    CHECK_THROWS_AS(build_reduced(none, partition_active(none), m), std::invalid_argument);
}

TEST_CASE("surrogate value at the motivating example load") {
    const PowerModelParams m = preset("exp1");
    const ReducedProblem rp = reduced_for({20.0, 0.0, 20.0, 0.0}, 2, 2, m);
    const std::vector<double> both_on_one{1.0, 1.0};  // 2x1 table, load 40
    const double q = surrogate_objective(rp, both_on_one);
    CHECK(q == doctest::Approx(94.67).epsilon(1e-3));
    // close to, but not equal to, the true cost of that load
    CHECK(std::abs(q - input_power(m, 40.0)) < 0.5);
}

TEST_CASE("surrogate is exact at its expansion center") {
    const PowerModelParams m = preset("exp1");
    ReducedProblem rp = reduced_for({17.5}, 1, 1, m);
    CHECK(surrogate_objective(rp, {1.0}) == rp.surrogate.f0);

    // Load p_mid on one PA, nothing on a second: f0 plus the quadratic at 0.
    rp.n_active_pas = 2;
    rp.pa_index_map = {0, 1};
    const QuadraticCoeffs& q = rp.surrogate;
    const double at_zero = q.f0 - q.f1 * q.p_mid + 0.5 * q.f2 * q.p_mid * q.p_mid;
    CHECK(surrogate_objective(rp, {1.0, 0.0}) == doctest::Approx(q.f0 + at_zero).epsilon(1e-12));
}

TEST_CASE("surrogate gradient matches central differences") {
    const PowerModelParams m = preset("exp1");
    Rng rng(211);
    for (int t = 0; t < 20; ++t) {
        const MappingInstance inst = random_instance(6, 3, 2, m.p_max, 0.2, rng);
        if (partition_active(inst).n_active_carriers == 0) continue;
        const ReducedProblem rp = build_reduced(inst, partition_active(inst), m);
        std::vector<double> x = random_row_stochastic(rp.n_active(), rp.n_active_pas, rng);
        const std::vector<double> grad = surrogate_gradient(rp, x);
        for (size_t k = 0; k < x.size(); ++k) {
            const auto f = [&](double v) {
                std::vector<double> y = x;
                y[k] = v;
                return surrogate_objective(rp, y);
            };
            CHECK(rel_error(grad[k], fd_first(f, x[k], 1e-6)) < 1e-6);
        }
    }
}

TEST_CASE("singleton polytopes solve immediately") {
    const PowerModelParams m = preset("exp1");
    const ReducedProblem one = reduced_for({20.0}, 1, 1, m);
    const RelaxedSolution s1 = solve_relaxed(one);
    CHECK(s1.values == std::vector<double>{1.0});
    CHECK(s1.converged);

    const ReducedProblem two = reduced_for({20.0, 5.0}, 1, 2, m);
    const RelaxedSolution s2 = solve_relaxed(two);
    CHECK(s2.values == std::vector<double>{1.0, 1.0});
    CHECK(s2.converged);
}

TEST_CASE("relaxed solutions stay inside the polytope") {
    const PowerModelParams m = preset("exp1");
    Rng rng(223);
    for (int t = 0; t < 40; ++t) {
        const MappingInstance inst = random_instance(6, 3, 2, m.p_max, 0.3, rng);
        const ActivePartition part = partition_active(inst);
        if (part.n_active_carriers == 0) continue;
        const ReducedProblem rp = build_reduced(inst, part, m);
        const RelaxedSolution sol = solve_relaxed(rp);
        REQUIRE(sol.rows == rp.n_active());
        REQUIRE(sol.cols == rp.n_active_pas);
        for (double v : sol.values) {
            CHECK(v >= -1e-8);
            CHECK(v <= 1.0 + 1e-8);
        }
        for (int i = 0; i < sol.rows; ++i) {
            double row = 0.0;
            for (int j = 0; j < sol.cols; ++j) row += sol.at(i, j);
            CHECK(row == doctest::Approx(1.0).epsilon(1e-8));
        }
        for (int j = 0; j < sol.cols; ++j) {
            double col = 0.0;
            for (int i = 0; i < sol.rows; ++i) col += sol.at(i, j);
            CHECK(col <= rp.capacity + 1e-8);
        }
    }
}

TEST_CASE("a single restart still escapes the uniform start") {
    // At the uniform table all PA loads are equal, so the linear model ties
    // on every vertex; the solver must use curvature and land on a vertex.
    const PowerModelParams m = preset("exp1");
    const ReducedProblem rp = reduced_for({20.0, 10.0, 10.0}, 2, 2, m);
    SolverOptions opt;
    opt.restarts = 1;
    const RelaxedSolution sol = solve_relaxed(rp, opt);
    CHECK(sol.converged);
    for (double v : sol.values) CHECK(std::min(std::abs(v), std::abs(v - 1.0)) < 1e-9);
    const std::vector<double> uniform(6, 0.5);
    CHECK(sol.objective < surrogate_objective(rp, uniform));
}

TEST_CASE("empty polytope is an error") {
    const PowerModelParams m = preset("exp1");
    ReducedProblem rp = reduced_for({10.0, 10.0}, 1, 2, m);
    rp.powers_active = {10.0, 10.0, 10.0};
    rp.carrier_index_map = {0, 1, 2};
    CHECK_THROWS_AS(solve_relaxed(rp), InfeasibleError);
}

TEST_CASE("rounding returns integral feasible input unchanged") {
    const PowerModelParams m = preset("exp1");
    const ReducedProblem rp = reduced_for({12.0, 7.0, 3.0}, 2, 2, m);
    RelaxedSolution integral;
    integral.rows = 3;
    integral.cols = 2;
    integral.values = {1, 0, 0, 1, 0, 1};
    const MappingMatrix rounded = round_by_sorting(rp, integral);
    CHECK(rounded.assignment() == std::vector<int>{0, 1, 1});

    // idempotent: rounding the rounded table changes nothing
    RelaxedSolution again;
    again.rows = 3;
    again.cols = 2;
    again.values.assign(6, 0.0);
    for (int i = 0; i < 3; ++i) again.values[static_cast<size_t>(i * 2 + rounded.assignment()[static_cast<size_t>(i)])] = 1.0;
    CHECK(round_by_sorting(rp, again).assignment() == rounded.assignment());
}

TEST_CASE("rounding walks the values in descending order with capacity blocks") {
    const PowerModelParams m = preset("exp1");
    const ReducedProblem rp = reduced_for({5.0, 5.0, 5.0}, 2, 2, m);
    RelaxedSolution sol;
    sol.rows = 3;
    sol.cols = 2;
    sol.values = {0.9, 0.1, 0.8, 0.2, 0.6, 0.4};
    // carriers 0,1 claim PA0; carrier 2's 0.6 is blocked there, lands on PA1
    CHECK(round_by_sorting(rp, sol).assignment() == std::vector<int>{0, 0, 1});
}

TEST_CASE("a stranded carrier falls back to the cheapest true-cost PA") {
    const PowerModelParams m = preset("exp1");
    ReducedProblem rp = reduced_for({10.0, 10.0}, 2, 1, m);
    REQUIRE(rp.n_active_pas == 2);
    RelaxedSolution sol;
    sol.rows = 2;
    sol.cols = 2;
    sol.values = {1.0, 0.0, 1.0, 0.0};  // both carriers want the K=1 PA
    const MappingMatrix out = round_by_sorting(rp, sol);
    CHECK(out.assignment() == std::vector<int>{0, 1});
}

TEST_CASE("rounding is capacity-feasible for arbitrary row-stochastic tables") {
    const PowerModelParams m = preset("exp1");
    Rng rng(227);
    for (int t = 0; t < 200; ++t) {
        const int capacity = 1 + t % 3;
        const int n_as = 2 + t % 2;
        const int n_ac = 1 + static_cast<int>(rng.uniform(0.0, static_cast<double>(n_as * capacity)));
        std::vector<double> powers(static_cast<size_t>(n_ac));
        for (double& p : powers) p = rng.uniform(0.1, 40.0 / capacity);

        ReducedProblem rp;
        rp.powers_active = powers;
        rp.n_active_pas = n_as;
        rp.capacity = capacity;
        rp.carrier_index_map.resize(static_cast<size_t>(n_ac));
        rp.pa_index_map.resize(static_cast<size_t>(n_as));
        rp.surrogate = taylor_coeffs(m);
        rp.params = m;

        RelaxedSolution sol;
        sol.rows = n_ac;
        sol.cols = n_as;
        sol.values = random_row_stochastic(n_ac, n_as, rng);

        const std::vector<int> assign = round_by_sorting(rp, sol).assignment();
        std::vector<int> counts(static_cast<size_t>(n_as), 0);
        for (int pa : assign) {
            REQUIRE(pa >= 0);
            REQUIRE(pa < n_as);
            counts[static_cast<size_t>(pa)] += 1;
        }
        for (int c : counts) CHECK(c <= capacity);
    }
}

TEST_CASE("dynamic mapping recovers the motivating example optimum") {
    const PowerModelParams m = preset("exp1");
    const MappingInstance inst({20.0, 0.0, 20.0, 0.0}, 2, 2);
    const MappingMatrix mapping = dynamic_map(inst, m);
    CHECK(is_feasible(inst, mapping).feasible);
    const double cost = total_input_power(inst, mapping, m);
    CHECK(cost == doctest::Approx(108.1).epsilon(2e-3));
    const std::vector<int> assign = mapping.assignment();
    CHECK(assign[0] == assign[2]);
}

TEST_CASE("pairing the large carrier with a small one beats splitting evenly") {
    const PowerModelParams m = preset("exp1");
    const MappingInstance inst({20.0, 10.0, 10.0}, 2, 2);
    const double dynamic_cost = total_input_power(inst, dynamic_map(inst, m), m);
    const double oracle_cost = exhaustive_search(inst, m).best_cost;
    CHECK(dynamic_cost == doctest::Approx(oracle_cost).epsilon(1e-9));
    CHECK(oracle_cost == doctest::Approx(119.97).epsilon(1e-3));
}

TEST_CASE("all-inactive instances sleep at n_pa * p_slp") {
    const PowerModelParams m = preset("exp1");
    const MappingInstance inst({0.0, 0.0, 0.0}, 3, 1);
    const MappingMatrix mapping = dynamic_map(inst, m);
    CHECK(is_feasible(inst, mapping).feasible);
    CHECK(total_input_power(inst, mapping, m) == 3 * 13.0);
}

TEST_CASE("dynamic mapping is always feasible and never beats the oracle") {
    const PowerModelParams m = preset("exp1");
    Rng rng(229);
    for (int t = 0; t < 150; ++t) {
        const int n_c = 3 + t % 4;
        const MappingInstance inst = random_instance(n_c, 3, 2, m.p_max, 0.35, rng);
        const MappingMatrix mapping = dynamic_map(inst, m);
        CHECK(is_feasible(inst, mapping).feasible);
        for (double load : mapping.loads(inst)) CHECK(load <= m.p_max + 1e-12);
        const double dynamic_cost = total_input_power(inst, mapping, m);
        const double oracle_cost = exhaustive_search(inst, m).best_cost;
        CHECK(oracle_cost <= dynamic_cost + 1e-9);
    }
}

TEST_CASE("repair pass resolves a load that rounding pushed past p_max") {
    const PowerModelParams m = preset("exp1");
    // Two 25 W carriers cannot share a PA (50 > p_max); the reduction would
    // pack them onto one PA, so the repair must move one out.
    const MappingInstance inst({25.0, 25.0}, 2, 2);
    const MappingMatrix mapping = dynamic_map(inst, m);
    CHECK(is_feasible(inst, mapping).feasible);
    const std::vector<int> assign = mapping.assignment();
    CHECK(assign[0] != assign[1]);
    for (double load : mapping.loads(inst)) CHECK(load <= m.p_max);

    // And when even that is impossible, the error propagates.
    const MappingInstance hopeless({50.0}, 1, 1);
    CHECK_THROWS_AS(dynamic_map(hopeless, m), OverloadError);
}

TEST_CASE("dynamic mapping captures most of the achievable gain at scale") {
    // 1000 seeded six-carrier instances per load mix. The aggregate
    // fraction of the static-to-optimal gain that the heuristic recovers is
    // high on mixed loads and lower when every carrier is active (the
    // quadratic surrogate cannot see the piecewise true cost); per-instance
    // closeness holds on most, not all, instances.
    const PowerModelParams m = preset("exp1");
    struct Mix {
        double p_zero;
        double min_aggregate_fog;
        int min_within_5pct;  // of 1000
    };
    for (const Mix mix : {Mix{0.0, 0.80, 650}, Mix{0.3, 0.95, 800}}) {
        Rng rng(9001);
        double sum_static = 0.0;
        double sum_dynamic = 0.0;
        double sum_best = 0.0;
        int close = 0;
        for (int t = 0; t < 1000; ++t) {
            const MappingInstance inst = random_instance(6, 3, 2, m.p_max, mix.p_zero, rng);
            const double stat = total_input_power(inst, static_mapping(inst), m);
            const double dyn = total_input_power(inst, dynamic_map(inst, m), m);
            const double best = exhaustive_search(inst, m).best_cost;
            sum_static += stat;
            sum_dynamic += dyn;
            sum_best += best;
            const double gap = stat - best;
            if (gap <= 1e-12 ? dyn - best <= 1e-9 : dyn - best <= 0.05 * gap + 1e-9) ++close;
        }
        const double aggregate_fog = (sum_static - sum_dynamic) / (sum_static - sum_best);
        CHECK(aggregate_fog >= mix.min_aggregate_fog);
        CHECK(close >= mix.min_within_5pct);
    }
}

TEST_CASE("permuting carriers permutes the mapping without changing cost") {
    const PowerModelParams m = preset("exp1");
    Rng rng(233);
    for (int t = 0; t < 30; ++t) {
        const MappingInstance inst = random_instance(6, 3, 2, m.p_max, 0.3, rng);
        std::vector<double> reversed(inst.powers().rbegin(), inst.powers().rend());
        const MappingInstance inst2(reversed, 3, 2);
        const double c1 = total_input_power(inst, dynamic_map(inst, m), m);
        const double c2 = total_input_power(inst2, dynamic_map(inst2, m), m);
        CHECK(c1 == doctest::Approx(c2).epsilon(1e-9));
    }
}

TEST_CASE("class_ab instances map without a Doherty surrogate") {
    PowerModelParams m;
    m.alpha = 2.7;
    m.p_th = 5.0;
    m.p_max = 40.0;
    m.p_sta = 20.0;
    m.p_slp = 13.0;
    m.variant = PaVariant::class_ab;
    validate(m);
    const MappingInstance inst({10.0, 0.0, 10.0, 0.0, 5.0, 0.0}, 3, 2);
    const MappingMatrix mapping = dynamic_map(inst, m);
    CHECK(is_feasible(inst, mapping).feasible);
    // linear model: any mapping on the minimum number of awake PAs is optimal
    CHECK(total_input_power(inst, mapping, m) ==
          doctest::Approx(exhaustive_search(inst, m).best_cost).epsilon(1e-9));
}

} // TEST_SUITE
