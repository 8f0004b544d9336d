#include "abq/graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "abq/errors.hpp"
#include "abq/numeric.hpp"
#include "abq/rng.hpp"

namespace abq {

namespace {

/// Attempts before generate_regular_graph gives up. At the sizes this
/// library targets the pairing model succeeds within a handful of tries.
constexpr std::uint32_t kMaxGenerationAttempts = 200000;

/// Maximum n accepted by the isomorphism machinery (adjacency rows fit in a
/// 16-bit mask and the backtracking search stays cheap).
constexpr std::uint32_t kMaxIsomorphismN = 12;

std::vector<std::vector<std::uint32_t>> adjacency_lists(const GraphInstance& g) {
    std::vector<std::vector<std::uint32_t>> adj(g.n);
    for (const Edge& e : g.edges) {
        adj[e.v1].push_back(e.v2);
        adj[e.v2].push_back(e.v1);
    }
    return adj;
}

std::vector<std::uint16_t> adjacency_masks(const GraphInstance& g) {
    std::vector<std::uint16_t> rows(g.n, 0);
    for (const Edge& e : g.edges) {
        rows[e.v1] |= static_cast<std::uint16_t>(1u << e.v2);
        rows[e.v2] |= static_cast<std::uint16_t>(1u << e.v1);
    }
    return rows;
}

/// Per-vertex triangle counts: invariant under isomorphism, cheap to
/// compare as a sorted sequence.
std::vector<std::uint32_t> triangle_counts(const std::vector<std::uint16_t>& rows) {
    const std::uint32_t n = static_cast<std::uint32_t>(rows.size());
    std::vector<std::uint32_t> tri(n, 0);
    for (std::uint32_t v = 0; v < n; ++v) {
        std::uint32_t count = 0;
        for (std::uint32_t a = 0; a < n; ++a) {
            if (!((rows[v] >> a) & 1u)) continue;
            for (std::uint32_t b = a + 1; b < n; ++b) {
                if (((rows[v] >> b) & 1u) && ((rows[a] >> b) & 1u)) ++count;
            }
        }
        tri[v] = count;
    }
    return tri;
}

/// Eigenvalues of the (symmetric, unweighted) adjacency matrix via cyclic
/// Jacobi rotations. n <= 12, so the dense sweep is trivial.
std::vector<double> adjacency_spectrum(const std::vector<std::uint16_t>& rows) {
    const std::size_t n = rows.size();
    std::vector<double> a(n * n, 0.0);
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t u = 0; u < n; ++u)
            if ((rows[v] >> u) & 1u) a[v * n + u] = 1.0;

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
        if (off < 1e-22) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (std::abs(apq) < 1e-15) continue;
                const double app = a[p * n + p];
                const double aqq = a[q * n + q];
                const double theta = 0.5 * std::atan2(2.0 * apq, aqq - app);
                const double c = std::cos(theta);
                const double s = std::sin(theta);
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k];
                    const double aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a[i * n + i];
    std::sort(eig.begin(), eig.end());
    return eig;
}

/// Backtracking search for a vertex bijection mapping a onto b.
bool find_mapping(const std::vector<std::uint16_t>& a, const std::vector<std::uint16_t>& b,
                  const std::vector<std::uint32_t>& tri_a,
                  const std::vector<std::uint32_t>& tri_b, std::vector<int>& map,
                  std::vector<bool>& used, std::uint32_t next) {
    const std::uint32_t n = static_cast<std::uint32_t>(a.size());
    if (next == n) return true;
    for (std::uint32_t cand = 0; cand < n; ++cand) {
        if (used[cand] || tri_a[next] != tri_b[cand]) continue;
        bool consistent = true;
        for (std::uint32_t prev = 0; prev < next; ++prev) {
            const bool edge_a = (a[next] >> prev) & 1u;
            const bool edge_b = (b[cand] >> static_cast<std::uint32_t>(map[prev])) & 1u;
            if (edge_a != edge_b) {
                consistent = false;
                break;
            }
        }
        if (!consistent) continue;
        map[next] = static_cast<int>(cand);
        used[cand] = true;
        if (find_mapping(a, b, tri_a, tri_b, map, used, next + 1)) return true;
        used[cand] = false;
    }
    return false;
}

/// One pairing-model draw: shuffled stubs matched in order. Returns the
/// normalized edge list, or nothing if the matching has a self loop or a
/// duplicate edge.
bool try_pairing(std::uint32_t n, std::uint32_t regularity, Rng& rng,
                 std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    std::vector<std::uint32_t> stubs;
    stubs.reserve(static_cast<std::size_t>(n) * regularity);
    for (std::uint32_t v = 0; v < n; ++v)
        for (std::uint32_t k = 0; k < regularity; ++k) stubs.push_back(v);
    for (std::size_t i = stubs.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(stubs[i - 1], stubs[j]);
    }
    edges.clear();
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
        std::uint32_t v1 = stubs[i];
        std::uint32_t v2 = stubs[i + 1];
        if (v1 == v2) return false;
        if (v1 > v2) std::swap(v1, v2);
        if (!seen.emplace(v1, v2).second) return false;
        edges.emplace_back(v1, v2);
    }
    return true;
}

}  // namespace

void validate_graph(const GraphInstance& g) {
    if (g.n == 0) throw ConfigError("graph '" + g.id + "': no vertices");
    if (g.regularity == 0) throw ConfigError("graph '" + g.id + "': zero regularity");
    if ((static_cast<std::uint64_t>(g.n) * g.regularity) % 2 != 0)
        throw ConfigError("graph '" + g.id + "': n * regularity must be even");
    const std::size_t expected_edges =
        static_cast<std::size_t>(g.n) * g.regularity / 2;
    if (g.edges.size() != expected_edges)
        throw ConfigError("graph '" + g.id + "': expected " +
                          std::to_string(expected_edges) + " edges, found " +
                          std::to_string(g.edges.size()));
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (const Edge& e : g.edges) {
        if (e.v1 >= g.n || e.v2 >= g.n)
            throw ConfigError("graph '" + g.id + "': vertex index out of range");
        if (e.v1 == e.v2) throw ConfigError("graph '" + g.id + "': self loop");
        const auto key = std::minmax(e.v1, e.v2);
        if (!seen.insert(key).second)
            throw ConfigError("graph '" + g.id + "': duplicate edge");
        if (!(e.weight > 0.0) || !(e.weight <= 1.0) || !std::isfinite(e.weight))
            throw ConfigError("graph '" + g.id + "': edge weight outside (0, 1]");
    }
    for (std::uint32_t deg : vertex_degrees(g)) {
        if (deg != g.regularity)
            throw ConfigError("graph '" + g.id + "': vertex degree " +
                              std::to_string(deg) + " != regularity " +
                              std::to_string(g.regularity));
    }
}

std::vector<std::uint32_t> vertex_degrees(const GraphInstance& g) {
    std::vector<std::uint32_t> deg(g.n, 0);
    for (const Edge& e : g.edges) {
        if (e.v1 < g.n) ++deg[e.v1];
        if (e.v2 < g.n) ++deg[e.v2];
    }
    return deg;
}

bool is_connected(const GraphInstance& g) {
    if (g.n == 0) return false;
    const auto adj = adjacency_lists(g);
    std::vector<bool> visited(g.n, false);
    std::vector<std::uint32_t> stack{0};
    visited[0] = true;
    std::uint32_t reached = 1;
    while (!stack.empty()) {
        const std::uint32_t v = stack.back();
        stack.pop_back();
        for (std::uint32_t u : adj[v]) {
            if (!visited[u]) {
                visited[u] = true;
                ++reached;
                stack.push_back(u);
            }
        }
    }
    return reached == g.n;
}

GraphInstance generate_regular_graph(std::uint32_t n, std::uint32_t regularity,
                                     bool weighted, std::uint64_t rng_seed) {
    if (regularity == 0) throw ConfigError("regularity must be positive");
    if (n < regularity + 1)
        throw ConfigError("a simple " + std::to_string(regularity) +
                          "-regular graph needs at least " +
                          std::to_string(regularity + 1) + " vertices, got " +
                          std::to_string(n));
    if ((static_cast<std::uint64_t>(n) * regularity) % 2 != 0)
        throw ConfigError("n * regularity must be even (handshake parity), got n = " +
                          std::to_string(n) + ", regularity = " +
                          std::to_string(regularity));

    Rng rng(rng_seed);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (std::uint32_t attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
        if (!try_pairing(n, regularity, rng, pairs)) continue;

        GraphInstance g;
        g.n = n;
        g.regularity = regularity;
        std::sort(pairs.begin(), pairs.end());
        g.edges.reserve(pairs.size());
        for (const auto& [v1, v2] : pairs) g.edges.push_back(Edge{v1, v2, 1.0});
        // A disconnected sample is rejected like a defective matching: the
        // instance family is connected graphs only.
        if (!is_connected(g)) continue;

        if (weighted) {
            // 1 - uniform() lies in (0, 1]: zero weights would silently
            // delete edges from the cost function.
            for (Edge& e : g.edges) e.weight = 1.0 - rng.uniform();
        }
        g.id = std::string(weighted ? "w" : "u") + std::to_string(regularity) + "r-n" +
               std::to_string(n) + "-s" + std::to_string(rng_seed);
        return g;
    }
    throw GenerationError("regular graph generation exhausted " +
                          std::to_string(kMaxGenerationAttempts) + " attempts (n = " +
                          std::to_string(n) + ", regularity = " +
                          std::to_string(regularity) + ")");
}

bool graphs_isomorphic(const GraphInstance& a, const GraphInstance& b) {
    if (a.n > kMaxIsomorphismN || b.n > kMaxIsomorphismN)
        throw CapacityError("isomorphism test supports at most " +
                            std::to_string(kMaxIsomorphismN) + " vertices");
    if (a.n != b.n || a.edges.size() != b.edges.size()) return false;

    auto degrees_a = vertex_degrees(a);
    auto degrees_b = vertex_degrees(b);
    std::sort(degrees_a.begin(), degrees_a.end());
    std::sort(degrees_b.begin(), degrees_b.end());
    if (degrees_a != degrees_b) return false;

    const auto rows_a = adjacency_masks(a);
    const auto rows_b = adjacency_masks(b);
    const auto tri_a = triangle_counts(rows_a);
    const auto tri_b = triangle_counts(rows_b);
    auto tri_sorted_a = tri_a;
    auto tri_sorted_b = tri_b;
    std::sort(tri_sorted_a.begin(), tri_sorted_a.end());
    std::sort(tri_sorted_b.begin(), tri_sorted_b.end());
    if (tri_sorted_a != tri_sorted_b) return false;

    const auto spec_a = adjacency_spectrum(rows_a);
    const auto spec_b = adjacency_spectrum(rows_b);
    for (std::size_t i = 0; i < spec_a.size(); ++i)
        if (std::abs(spec_a[i] - spec_b[i]) > 1e-6) return false;

    std::vector<int> map(a.n, -1);
    std::vector<bool> used(a.n, false);
    return find_mapping(rows_a, rows_b, tri_a, tri_b, map, used, 0);
}

U3rCollection collect_nonisomorphic_u3r(std::uint32_t n, std::uint32_t attempt_budget,
                                        std::uint64_t rng_seed) {
    if (n > kMaxIsomorphismN)
        throw CapacityError("non-isomorphic collection supports at most " +
                            std::to_string(kMaxIsomorphismN) + " vertices");
    if (attempt_budget == 0) throw ConfigError("attempt budget must be positive");

    U3rCollection out;
    std::uint32_t last_new = 0;
    const std::uint32_t window = std::max<std::uint32_t>(200, attempt_budget / 10);
    for (std::uint32_t attempt = 1; attempt <= attempt_budget; ++attempt) {
        out.attempts = attempt;
        GraphInstance g = generate_regular_graph(
            n, 3, false, derive_stream(rng_seed, "u3r-collect", n, attempt));
        bool known = false;
        for (const GraphInstance& existing : out.graphs) {
            if (graphs_isomorphic(existing, g)) {
                known = true;
                break;
            }
        }
        if (!known) {
            g.id = "u3r-n" + std::to_string(n) + "-iso" +
                   std::to_string(out.graphs.size() + 1);
            out.graphs.push_back(std::move(g));
            last_new = attempt;
        }
        if (attempt - last_new >= window) {
            out.complete = true;
            break;
        }
    }
    return out;
}

GraphInstance load_graph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open graph file: " + path.string());
    GraphInstance g;
    std::size_t m = 0;
    if (!(in >> g.n >> m >> g.regularity))
        throw IoError("malformed graph header in " + path.string());
    g.edges.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        Edge e;
        if (!(in >> e.v1 >> e.v2 >> e.weight))
            throw IoError("malformed edge line " + std::to_string(i + 1) + " in " +
                          path.string());
        g.edges.push_back(e);
    }
    g.id = path.stem().string();
    validate_graph(g);
    return g;
}

void save_graph(const GraphInstance& g, const std::filesystem::path& path) {
    validate_graph(g);
    std::ofstream out(path);
    if (!out) throw IoError("cannot write graph file: " + path.string());
    out << g.n << ' ' << g.edges.size() << ' ' << g.regularity << '\n';
    for (const Edge& e : g.edges)
        out << e.v1 << ' ' << e.v2 << ' ' << format_double(e.weight) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace abq
