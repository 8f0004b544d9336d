#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <set>

#include "abq/errors.hpp"
#include "abq/graph.hpp"
#include "oracles.hpp"

namespace {

abq::GraphInstance k4() {
    abq::GraphInstance g;
    g.id = "k4";
    g.n = 4;
    g.regularity = 3;
    g.edges = {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0},
               {1, 2, 1.0}, {1, 3, 1.0}, {2, 3, 1.0}};
    return g;
}

abq::GraphInstance prism() {
    // Two triangles joined by a perfect matching.
    abq::GraphInstance g;
    g.id = "prism";
    g.n = 6;
    g.regularity = 3;
    g.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}, {3, 4, 1.0}, {4, 5, 1.0},
               {3, 5, 1.0}, {0, 3, 1.0}, {1, 4, 1.0}, {2, 5, 1.0}};
    return g;
}

abq::GraphInstance k33() {
    abq::GraphInstance g;
    g.id = "k33";
    g.n = 6;
    g.regularity = 3;
    g.edges = {{0, 3, 1.0}, {0, 4, 1.0}, {0, 5, 1.0}, {1, 3, 1.0}, {1, 4, 1.0},
               {1, 5, 1.0}, {2, 3, 1.0}, {2, 4, 1.0}, {2, 5, 1.0}};
    return g;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("validate_graph accepts the canonical instances") {
    CHECK_NOTHROW(abq::validate_graph(k4()));
    CHECK_NOTHROW(abq::validate_graph(prism()));
    CHECK_NOTHROW(abq::validate_graph(k33()));
}

TEST_CASE("validate_graph rejects structural violations") {
    auto g = k4();
    g.edges[0] = {0, 0, 1.0};
    CHECK_THROWS_AS(abq::validate_graph(g), abq::ConfigError);

    g = k4();
    g.edges[1] = {0, 1, 1.0};  // duplicate of edges[0]
    CHECK_THROWS_AS(abq::validate_graph(g), abq::ConfigError);

    g = k4();
    g.edges[0].weight = 0.0;
    CHECK_THROWS_AS(abq::validate_graph(g), abq::ConfigError);

    g = k4();
    g.edges[0].weight = 1.5;
    CHECK_THROWS_AS(abq::validate_graph(g), abq::ConfigError);

    g = k4();
    g.edges[0].v2 = 9;
    CHECK_THROWS_AS(abq::validate_graph(g), abq::ConfigError);

    g = k4();
    g.edges.pop_back();
    CHECK_THROWS_AS(abq::validate_graph(g), abq::ConfigError);
}

TEST_CASE("generation rejects impossible sizes") {
    // Odd n * regularity violates handshake parity.
    CHECK_THROWS_AS(abq::generate_regular_graph(5, 3, false, 1), abq::ConfigError);
    // A simple 3-regular graph needs at least 4 vertices.
    CHECK_THROWS_AS(abq::generate_regular_graph(3, 3, false, 1), abq::ConfigError);
}

TEST_CASE("generated graphs are valid, connected, and deterministic") {
    for (std::uint32_t n : {4u, 6u, 8u, 10u}) {
        for (bool weighted : {false, true}) {
            const auto g = abq::generate_regular_graph(n, 3, weighted, 77);
            CHECK(g.n == n);
            CHECK(g.regularity == 3);
            CHECK_NOTHROW(abq::validate_graph(g));
            CHECK(abq::is_connected(g));
            if (!weighted)
                for (const auto& e : g.edges) CHECK(e.weight == 1.0);
        }
    }
    const auto a = abq::generate_regular_graph(8, 3, true, 123);
    const auto b = abq::generate_regular_graph(8, 3, true, 123);
    REQUIRE(a.edges.size() == b.edges.size());
    for (std::size_t i = 0; i < a.edges.size(); ++i) {
        CHECK(a.edges[i].v1 == b.edges[i].v1);
        CHECK(a.edges[i].v2 == b.edges[i].v2);
        CHECK(a.edges[i].weight == b.edges[i].weight);
    }
}

TEST_CASE("weighted generation draws weights in (0, 1]") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto g = abq::generate_regular_graph(8, 3, true, seed);
        for (const auto& e : g.edges) {
            CHECK(e.weight > 0.0);
            CHECK(e.weight <= 1.0);
        }
    }
}

TEST_CASE("n=4 has a single 3-regular graph: the complete graph") {
    const auto g = abq::generate_regular_graph(4, 3, false, 5);
    CHECK(g.edges.size() == 6);  // K4 is forced
    CHECK(abq::graphs_isomorphic(g, k4()));
}

TEST_CASE("isomorphism distinguishes the two cubic classes on 6 vertices") {
    CHECK(abq::graphs_isomorphic(prism(), prism()));
    CHECK(abq::graphs_isomorphic(k33(), k33()));
    CHECK_FALSE(abq::graphs_isomorphic(prism(), k33()));

    // Relabeled prism is still a prism.
    auto relabeled = prism();
    for (auto& e : relabeled.edges) {
        e.v1 = (e.v1 + 2) % 6;
        e.v2 = (e.v2 + 2) % 6;
    }
    CHECK(abq::graphs_isomorphic(relabeled, prism()));
    CHECK_FALSE(abq::graphs_isomorphic(relabeled, k33()));
}

TEST_CASE("isomorphism ignores weights") {
    auto weighted = prism();
    for (auto& e : weighted.edges) e.weight = 0.5;
    CHECK(abq::graphs_isomorphic(weighted, prism()));
}

TEST_CASE("exhaustive enumeration confirms the small class counts") {
    // Independent oracle: all 3-regular graphs on 4 and 6 vertices.
    CHECK(abq::test::count_cubic_graphs_exhaustive(4, false) == 1);
    CHECK(abq::test::count_cubic_graphs_exhaustive(6, false) == 2);
    CHECK(abq::test::count_cubic_graphs_exhaustive(6, true) == 2);
}

TEST_CASE("collection finds both classes at n=6 and all five at n=8") {
    const auto six = abq::collect_nonisomorphic_u3r(6, 4000, 3);
    CHECK(six.complete);
    CHECK(six.graphs.size() == 2);

    const auto eight = abq::collect_nonisomorphic_u3r(8, 6000, 3);
    CHECK(eight.complete);
    CHECK(eight.graphs.size() == 5);
    for (std::size_t i = 0; i < eight.graphs.size(); ++i) {
        CHECK(abq::is_connected(eight.graphs[i]));
        for (std::size_t j = i + 1; j < eight.graphs.size(); ++j)
            CHECK_FALSE(abq::graphs_isomorphic(eight.graphs[i], eight.graphs[j]));
    }
}

TEST_CASE("graph files round-trip") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "abq-graph-roundtrip";
    fs::create_directories(dir);
    const auto g = abq::generate_regular_graph(8, 3, true, 9);
    const fs::path file = dir / (g.id + ".graph");
    abq::save_graph(g, file);
    const auto loaded = abq::load_graph(file);
    CHECK(loaded.n == g.n);
    CHECK(loaded.regularity == g.regularity);
    CHECK(loaded.id == g.id);
    REQUIRE(loaded.edges.size() == g.edges.size());
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        CHECK(loaded.edges[i].v1 == g.edges[i].v1);
        CHECK(loaded.edges[i].v2 == g.edges[i].v2);
        CHECK(loaded.edges[i].weight == g.edges[i].weight);
    }
    fs::remove_all(dir);
}

TEST_CASE("load_graph reports missing and malformed files") {
    CHECK_THROWS_AS(abq::load_graph("/nonexistent/gone.graph"), abq::IoError);
}

}  // TEST_SUITE
