#pragma once

#include <cstdint>
#include <vector>

#include "abq/graph.hpp"

namespace abq {

/// Hard ceiling on the statevector width; 2^24 amplitudes (256 MiB) is the
/// largest problem this simulator accepts.
inline constexpr std::uint32_t kDefaultQubitLimit = 24;

/// Diagonal of the cost operator over all computational basis states:
/// values[z] = sum over edges of (w/2) * z_{v1} * z_{v2}, where z_j = +1 when
/// bit j of the index z is 0 and -1 when it is 1. Bit j of the basis index
/// corresponds to qubit j throughout the library.
struct CostDiagonal {
    std::uint32_t n = 0;
    std::vector<double> values;
    /// Constant offset sum(w/2); the cut value of a state with energy E is
    /// e0 - E.
    double e0 = 0.0;
};

/// Exact diagonalization result: the ground manifold of the cost diagonal.
struct ExactSolution {
    /// Maximum cut value, e0 - min(values).
    double e_max = 0.0;
    /// All basis states attaining the minimum (always even: global spin flip
    /// maps each minimizer to its bitwise complement).
    std::vector<std::uint64_t> ground_bitstrings;
    std::uint64_t degeneracy = 0;
};

/// Throws CapacityError when n exceeds qubit_limit.
CostDiagonal build_cost_diagonal(const GraphInstance& g,
                                 std::uint32_t qubit_limit = kDefaultQubitLimit);

ExactSolution solve_exact(const CostDiagonal& d);

}  // namespace abq
