#pragma once

#include <cstddef>
#include <string>

namespace abq {

/// Pairwise (cascade) summation of term(i) over i in [lo, hi). The split
/// points depend only on the range, so the rounding pattern is identical on
/// every run and the error grows O(log n) instead of O(n).
template <class F>
double pairwise_sum(std::size_t lo, std::size_t hi, F&& term) {
    const std::size_t count = hi - lo;
    if (count <= 64) {
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += term(i);
        return acc;
    }
    const std::size_t mid = lo + count / 2;
    return pairwise_sum(lo, mid, term) + pairwise_sum(mid, hi, term);
}

/// Shortest-exact decimal formatting ("%.17g"): reading the text back yields
/// the identical double, so emitted files are byte-stable across runs.
std::string format_double(double value);

}  // namespace abq
