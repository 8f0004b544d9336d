#include "abq/cost.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "abq/errors.hpp"

namespace abq {

CostDiagonal build_cost_diagonal(const GraphInstance& g, std::uint32_t qubit_limit) {
    validate_graph(g);
    if (g.n > qubit_limit)
        throw CapacityError("statevector for " + std::to_string(g.n) +
                            " qubits exceeds the limit of " + std::to_string(qubit_limit));

    CostDiagonal d;
    d.n = g.n;
    const std::size_t dim = std::size_t{1} << g.n;
    d.values.assign(dim, 0.0);
    for (const Edge& e : g.edges) {
        const double half_w = 0.5 * e.weight;
        const std::uint64_t mask =
            (std::uint64_t{1} << e.v1) | (std::uint64_t{1} << e.v2);
        // Odd parity of z & mask means the endpoints' bits differ, i.e. the
        // spin product z_{v1} z_{v2} is -1.
        for (std::size_t z = 0; z < dim; ++z)
            d.values[z] += (std::popcount(z & mask) & 1u) ? -half_w : half_w;
        d.e0 += half_w;
    }
    return d;
}

ExactSolution solve_exact(const CostDiagonal& d) {
    if (d.values.empty()) throw ConfigError("empty cost diagonal");

    double min_value = d.values[0];
    for (double v : d.values)
        if (v < min_value) min_value = v;

    // Exact degeneracy (e.g. the global spin flip) gives exactly equal
    // doubles, but weighted near-ties from rounding are collected too.
    const double tie_tol = 1e-12 * (1.0 + std::abs(min_value));
    ExactSolution sol;
    for (std::size_t z = 0; z < d.values.size(); ++z)
        if (d.values[z] <= min_value + tie_tol) sol.ground_bitstrings.push_back(z);
    sol.degeneracy = sol.ground_bitstrings.size();
    sol.e_max = d.e0 - min_value;
    return sol;
}

}  // namespace abq
