#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace abq {

/// Stateless 64-bit finalizer (the splitmix64 output function). Used to
/// absorb seed components into well-separated stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// FNV-1a hash of a byte string.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Deterministic seed for the random stream owned by one (graph, level,
/// restart) task. Every randomized task draws from its own stream, so the
/// execution schedule (serial or parallel, any interleaving) cannot change
/// any result.
inline std::uint64_t derive_stream(std::uint64_t master_seed, std::string_view graph_id,
                                   std::uint64_t level, std::uint64_t restart) {
    std::uint64_t x = mix64(master_seed + 0x9e3779b97f4a7c15ULL);
    x = mix64(x ^ fnv1a64(graph_id));
    x = mix64(x ^ (level + 0xd1b54a32d192ed03ULL));
    x = mix64(x ^ (restart + 0x94d049bb133111ebULL));
    return x;
}

/// Deterministic random stream. The variate recipes are fixed here rather
/// than taken from <random> distributions (which are implementation-defined),
/// so identical seeds give identical draws on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, bound); bound must be nonzero.
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(engine_()) * bound) >> 64);
    }

    /// Standard normal via the Box-Muller transform; consumes exactly two
    /// uniforms per call. 1 - uniform() lies in (0, 1], keeping the log finite.
    double normal() {
        const double a = 1.0 - uniform();
        const double b = uniform();
        return std::sqrt(-2.0 * std::log(a)) * std::cos(2.0 * std::numbers::pi * b);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace abq
