#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace abq {

struct Edge {
    std::uint32_t v1 = 0;
    std::uint32_t v2 = 0;
    double weight = 1.0;
};

/// One MaxCut instance: a simple connected regular graph with edge weights
/// in (0, 1] (all exactly 1 for unweighted instances).
struct GraphInstance {
    std::string id;
    std::uint32_t n = 0;
    std::uint32_t regularity = 3;
    std::vector<Edge> edges;
};

/// Throws ConfigError if the instance violates a structural invariant:
/// self loop, duplicate edge, vertex index out of range, degree != regularity,
/// wrong edge count, or a weight outside (0, 1].
void validate_graph(const GraphInstance& g);

bool is_connected(const GraphInstance& g);

std::vector<std::uint32_t> vertex_degrees(const GraphInstance& g);

/// Random simple connected regular graph via the pairing (configuration)
/// model: regularity stubs per vertex, a uniform perfect matching of stubs,
/// and a full restart whenever the sample has a self loop, a duplicate edge,
/// or is disconnected. Weighted instances draw weights uniformly from (0, 1].
///
/// Requires n >= regularity + 1 and n * regularity even (ConfigError
/// otherwise); throws GenerationError if the retry budget is exhausted.
GraphInstance generate_regular_graph(std::uint32_t n, std::uint32_t regularity,
                                     bool weighted, std::uint64_t rng_seed);

/// Structural isomorphism test for small graphs (n <= 12). Weights are
/// ignored; invariant prefilters (degree sequence, triangle counts, adjacency
/// spectrum) run before the backtracking vertex-mapping search.
bool graphs_isomorphic(const GraphInstance& a, const GraphInstance& b);

struct U3rCollection {
    std::vector<GraphInstance> graphs;
    /// True when generation went one full stabilization window beyond the
    /// last newly discovered class.
    bool complete = false;
    /// Successful generations consumed.
    std::uint32_t attempts = 0;
};

/// Collects pairwise non-isomorphic unweighted 3-regular graphs on n
/// vertices by repeated generation and deduplication. Stops early once no
/// new class has appeared for a stabilization window of attempts; if the
/// budget runs out first the collection is returned flagged incomplete.
/// Requires n <= 12 (the isomorphism test is exponential).
U3rCollection collect_nonisomorphic_u3r(std::uint32_t n, std::uint32_t attempt_budget,
                                        std::uint64_t rng_seed);

/// Text format: header "n m regularity", then m lines "v1 v2 weight".
GraphInstance load_graph(const std::filesystem::path& path);
void save_graph(const GraphInstance& g, const std::filesystem::path& path);

}  // namespace abq
