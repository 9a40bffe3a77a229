#include "mcpa/oracle.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "mcpa/errors.hpp"

namespace mcpa {

namespace {

struct SearchState {
    const MappingInstance* instance = nullptr;
    const PowerModelParams* params = nullptr;
    bool prune_symmetry = false;

    std::vector<int> assign;
    std::vector<int> counts;
    std::vector<double> loads;  // incremental, used for pruning only

    std::vector<int> best_assign;
    double best_cost = std::numeric_limits<double>::infinity();
    std::int64_t examined = 0;

    void evaluate_leaf() {
        const int n_pa = instance->n_pa();
        // Fresh per-PA sums in carrier order: the incremental loads carry
        // add/undo rounding residue, and a sleeping PA must read exactly 0.
        std::vector<double> exact(static_cast<size_t>(n_pa), 0.0);
        for (size_t i = 0; i < assign.size(); ++i) {
            exact[static_cast<size_t>(assign[i])] += instance->power(static_cast<int>(i));
        }
        double cost = 0.0;
        for (double l : exact) {
            if (l > params->p_max) return;  // overloaded, not a feasible mapping
            cost += input_power(*params, l);
        }
        ++examined;
        if (cost < best_cost) {  // first hit wins ties: lexicographic order
            best_cost = cost;
            best_assign = assign;
        }
    }

    void search(int carrier) {
        if (carrier == instance->n_carriers()) {
            evaluate_leaf();
            return;
        }
        const double p = instance->power(carrier);
        bool opened_empty = false;
        for (int j = 0; j < instance->n_pa(); ++j) {
            if (prune_symmetry && counts[static_cast<size_t>(j)] == 0) {
                // PAs are identical: opening any empty PA beyond the first
                // revisits a relabeling of an already-explored branch.
                if (opened_empty) break;
                opened_empty = true;
            }
            if (counts[static_cast<size_t>(j)] < instance->capacity() &&
                loads[static_cast<size_t>(j)] + p <= params->p_max) {
                search_on(carrier, j, p);
            }
        }
    }

    void search_on(int carrier, int j, double p) {
        counts[static_cast<size_t>(j)] += 1;
        loads[static_cast<size_t>(j)] += p;
        assign[static_cast<size_t>(carrier)] = j;
        search(carrier + 1);
        counts[static_cast<size_t>(j)] -= 1;
        loads[static_cast<size_t>(j)] -= p;
    }
};

} // namespace

OracleResult exhaustive_search(const MappingInstance& instance, const PowerModelParams& params,
                               bool prune_symmetry) {
    if (instance.n_carriers() > instance.n_pa() * instance.capacity()) {
        throw InfeasibleError("exhaustive_search: no feasible mapping exists");
    }
    if (!prune_symmetry &&
        std::pow(static_cast<double>(instance.n_pa()), instance.n_carriers()) > 1e8) {
        throw ResourceLimitError("exhaustive_search: raw space above 1e8 mappings; "
                                 "enable symmetry pruning");
    }

    SearchState state;
    state.instance = &instance;
    state.params = &params;
    state.prune_symmetry = prune_symmetry;
    state.assign.assign(static_cast<size_t>(instance.n_carriers()), 0);
    state.counts.assign(static_cast<size_t>(instance.n_pa()), 0);
    state.loads.assign(static_cast<size_t>(instance.n_pa()), 0.0);
    state.search(0);

    if (state.examined == 0) {
        throw OverloadError("exhaustive_search: every mapping exceeds p_max on some PA");
    }
    OracleResult result{MappingMatrix::from_assignment(state.best_assign, instance.n_pa()),
                        state.best_cost, state.examined};
    return result;
}

} // namespace mcpa
