#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "abq/cost.hpp"
#include "abq/errors.hpp"
#include "abq/graph.hpp"
#include "oracles.hpp"

namespace {

abq::GraphInstance single_edge(double weight = 1.0) {
    abq::GraphInstance g;
    g.id = "edge";
    g.n = 2;
    g.regularity = 1;
    g.edges = {{0, 1, weight}};
    return g;
}

abq::GraphInstance prism() {
    abq::GraphInstance g;
    g.id = "prism";
    g.n = 6;
    g.regularity = 3;
    g.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}, {3, 4, 1.0}, {4, 5, 1.0},
               {3, 5, 1.0}, {0, 3, 1.0}, {1, 4, 1.0}, {2, 5, 1.0}};
    return g;
}

}  // namespace

TEST_SUITE("cost") {

TEST_CASE("single edge diagonal is (+w/2, -w/2, -w/2, +w/2)") {
    const auto d = abq::build_cost_diagonal(single_edge(0.8));
    REQUIRE(d.values.size() == 4);
    CHECK(d.values[0] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(d.values[1] == doctest::Approx(-0.4).epsilon(1e-15));
    CHECK(d.values[2] == doctest::Approx(-0.4).epsilon(1e-15));
    CHECK(d.values[3] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(d.e0 == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("diagonal matches the per-edge oracle on random graphs") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const auto g = abq::generate_regular_graph(8, 3, seed % 2 == 0, seed);
        const auto d = abq::build_cost_diagonal(g);
        CHECK(d.n == g.n);
        for (std::size_t z = 0; z < d.values.size(); ++z) {
            const double expected = abq::test::diagonal_entry(g, z);
            CHECK(std::abs(d.values[z] - expected) <= 1e-14);
        }
    }
}

TEST_CASE("e0 is the half-sum of weights and links energy to cut value") {
    const auto g = abq::generate_regular_graph(8, 3, true, 21);
    const auto d = abq::build_cost_diagonal(g);
    double half_sum = 0.0;
    for (const auto& e : g.edges) half_sum += 0.5 * e.weight;
    CHECK(d.e0 == doctest::Approx(half_sum).epsilon(1e-14));
    // e0 - values[z] equals the cut value of assignment z.
    for (std::uint64_t z = 0; z < d.values.size(); z += 17) {
        const double cut = abq::test::cut_value(g, z);
        CHECK(d.e0 - d.values[z] == doctest::Approx(cut).epsilon(1e-12));
    }
}

TEST_CASE("Z2 spin-flip symmetry holds exactly") {
    for (std::uint64_t seed = 2; seed <= 10; seed += 2) {
        const auto g = abq::generate_regular_graph(6, 3, true, seed);
        const auto d = abq::build_cost_diagonal(g);
        const std::uint64_t mask = d.values.size() - 1;
        for (std::size_t z = 0; z < d.values.size(); ++z)
            CHECK(d.values[z] == d.values[~z & mask]);
    }
}

TEST_CASE("solve_exact reproduces brute-force max cut") {
    SUBCASE("prism max cut is 7") {
        const auto g = prism();
        const auto oracle = abq::test::brute_force_max_cut(g);
        CHECK(oracle.max_value == doctest::Approx(7.0).epsilon(1e-15));
        const auto sol = abq::solve_exact(abq::build_cost_diagonal(g));
        CHECK(sol.e_max == doctest::Approx(7.0).epsilon(1e-12));
        CHECK(sol.degeneracy == oracle.argmax.size());
    }
    SUBCASE("random weighted instances") {
        for (std::uint64_t seed = 31; seed <= 35; ++seed) {
            const auto g = abq::generate_regular_graph(8, 3, true, seed);
            const auto oracle = abq::test::brute_force_max_cut(g);
            const auto sol = abq::solve_exact(abq::build_cost_diagonal(g));
            CHECK(sol.e_max == doctest::Approx(oracle.max_value).epsilon(1e-12));
            const std::set<std::uint64_t> ours(sol.ground_bitstrings.begin(),
                                               sol.ground_bitstrings.end());
            const std::set<std::uint64_t> theirs(oracle.argmax.begin(),
                                                 oracle.argmax.end());
            CHECK(ours == theirs);
        }
    }
}

TEST_CASE("ground manifold is closed under global spin flip") {
    for (std::uint64_t seed = 41; seed <= 44; ++seed) {
        const auto g = abq::generate_regular_graph(8, 3, seed % 2 == 0, seed);
        const auto sol = abq::solve_exact(abq::build_cost_diagonal(g));
        CHECK(sol.degeneracy % 2 == 0);
        const std::uint64_t mask = (std::uint64_t{1} << g.n) - 1;
        const std::set<std::uint64_t> ground(sol.ground_bitstrings.begin(),
                                             sol.ground_bitstrings.end());
        for (std::uint64_t z : ground) CHECK(ground.count(~z & mask) == 1);
    }
}

TEST_CASE("capacity limit is enforced") {
    abq::GraphInstance g;
    g.id = "big";
    g.n = 26;
    g.regularity = 3;
    // Build a valid 3-regular circulant on 26 vertices: ring plus diameter.
    for (std::uint32_t v = 0; v < 26; ++v) {
        const std::uint32_t next = (v + 1) % 26;
        abq::Edge e{std::min(v, next), std::max(v, next), 1.0};
        g.edges.push_back(e);
    }
    for (std::uint32_t v = 0; v < 13; ++v) g.edges.push_back({v, v + 13, 1.0});
    CHECK_THROWS_AS(abq::build_cost_diagonal(g), abq::CapacityError);
    CHECK_NOTHROW(abq::build_cost_diagonal(
        abq::generate_regular_graph(8, 3, false, 1), 8));
    CHECK_THROWS_AS(
        abq::build_cost_diagonal(abq::generate_regular_graph(10, 3, false, 1), 8),
        abq::CapacityError);
}

}  // TEST_SUITE
