#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <filesystem>
#include <numbers>
#include <vector>

#include "abq/cost.hpp"
#include "abq/errors.hpp"
#include "abq/graph.hpp"
#include "abq/rng.hpp"
#include "abq/statevector.hpp"
#include "oracles.hpp"

namespace {

abq::StateVector random_state(std::uint32_t n, std::uint64_t seed) {
    abq::Rng rng(seed);
    abq::StateVector sv;
    sv.n = n;
    sv.amps.resize(std::size_t{1} << n);
    double norm_sq = 0.0;
    for (auto& a : sv.amps) {
        a = {rng.normal(), rng.normal()};
        norm_sq += std::norm(a);
    }
    const double scale = 1.0 / std::sqrt(norm_sq);
    for (auto& a : sv.amps) a *= scale;
    return sv;
}

}  // namespace

TEST_SUITE("statevector") {

TEST_CASE("zero bias initial state is the uniform |-> product") {
    const abq::BiasField bias{std::vector<double>(3, 0.0)};
    const auto sv = abq::initial_state(bias);
    REQUIRE(sv.amps.size() == 8);
    const double mag = 1.0 / std::sqrt(8.0);
    for (std::size_t z = 0; z < 8; ++z) {
        const double sign = (std::popcount(z) % 2 == 0) ? 1.0 : -1.0;
        CHECK(sv.amps[z].real() == doctest::Approx(sign * mag).epsilon(1e-14));
        CHECK(sv.amps[z].imag() == 0.0);
    }
}

TEST_CASE("initial state is the per-qubit ground state of X - h Z") {
    // <Z> of the single-qubit state must be h / sqrt(1 + h^2), and the
    // energy must be the ground eigenvalue -sqrt(1 + h^2).
    for (double h : {-2.0, -1.0, -0.3, 0.0, 0.5, 1.0, 4.0}) {
        const abq::BiasField bias{{h}};
        const auto sv = abq::initial_state(bias);
        const double w = std::sqrt(1.0 + h * h);
        const double p0 = std::norm(sv.amps[0]);
        const double p1 = std::norm(sv.amps[1]);
        CHECK(p0 + p1 == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(p0 - p1 == doctest::Approx(h / w).epsilon(1e-12));
        // <X> = 2 Re(a0* a1); energy <X - hZ> = <X> - h <Z> = -w.
        const double x = 2.0 * (sv.amps[0] * std::conj(sv.amps[1])).real();
        CHECK(x - h * (p0 - p1) == doctest::Approx(-w).epsilon(1e-12));
    }
}

TEST_CASE("initial state for a large bias approaches a basis state") {
    const abq::BiasField bias{{10.0}};
    const auto sv = abq::initial_state(bias);
    CHECK(std::norm(sv.amps[0]) > 0.997);
}

TEST_CASE("bias validation guards magnitude and finiteness") {
    CHECK_THROWS_AS(abq::initial_state(abq::BiasField{{11.0}}), abq::ConfigError);
    CHECK_THROWS_AS(abq::initial_state(abq::BiasField{{std::nan("")}}),
                    abq::ConfigError);
    CHECK_NOTHROW(abq::validate_bias(abq::BiasField{{10.0}}));
}

TEST_CASE("mixer and cost phase preserve the norm to 1e-12 over 1000 layers") {
    const auto g = abq::generate_regular_graph(6, 3, true, 5);
    const auto d = abq::build_cost_diagonal(g);
    abq::Rng rng(99);
    auto sv = random_state(6, 100);
    std::vector<double> h(6);
    for (int layer = 0; layer < 1000; ++layer) {
        for (double& x : h) x = rng.uniform(-3.0, 3.0);
        abq::apply_cost_phase(sv, d, rng.uniform(-3.0, 3.0));
        abq::apply_mixer(sv, abq::BiasField{h}, rng.uniform(-3.0, 3.0));
        CHECK(std::abs(abq::norm(sv) - 1.0) <= 1e-12);
    }
}

TEST_CASE("mixer with zero bias equals the independent X-rotation oracle") {
    const auto g = abq::generate_regular_graph(4, 3, false, 7);
    const abq::Schedule sched{{0.9}, {0.37}};
    const auto plain = abq::test::plain_qaoa_evolve(g, sched, false);
    const auto d = abq::build_cost_diagonal(g);
    const abq::BiasField zero{std::vector<double>(4, 0.0)};
    const auto sv = abq::evolve(d, sched, zero);
    REQUIRE(plain.size() == sv.amps.size());
    for (std::size_t z = 0; z < plain.size(); ++z) {
        CHECK(sv.amps[z].real() == doctest::Approx(plain[z].real()).epsilon(1e-14));
        CHECK(sv.amps[z].imag() == doctest::Approx(plain[z].imag()).epsilon(1e-14));
    }
}

TEST_CASE("evolution matches the dense-matrix oracle at n <= 4") {
    abq::Rng rng(2024);
    for (int trial = 0; trial < 6; ++trial) {
        const bool weighted = trial % 2 == 0;
        const auto g = abq::generate_regular_graph(4, 3, weighted, 50 + trial);
        const std::size_t p = 1 + trial % 3;
        abq::Schedule sched;
        std::vector<double> bias(g.n);
        for (std::size_t k = 0; k < p; ++k) {
            sched.gammas.push_back(rng.uniform(-2.0, 2.0));
            sched.betas.push_back(rng.uniform(-2.0, 2.0));
        }
        for (double& h : bias) h = rng.uniform(-2.0, 2.0);

        const auto oracle = abq::test::dense_evolve(g, bias, sched);
        const auto d = abq::build_cost_diagonal(g);
        const auto sv = abq::evolve(d, sched, abq::BiasField{bias});
        REQUIRE(oracle.size() == sv.amps.size());
        for (std::size_t z = 0; z < oracle.size(); ++z)
            CHECK(std::abs(sv.amps[z] - oracle[z]) <= 1e-10);
    }
}

TEST_CASE("spin-flip identity: evolving from |-> equals flipped evolution "
          "from |+> with negated mixing angles") {
    const auto g = abq::generate_regular_graph(6, 3, true, 31);
    const abq::Schedule sched{{0.8, -0.45}, {0.3, 0.55}};
    abq::Schedule negated = sched;
    for (double& b : negated.betas) b = -b;

    const auto d = abq::build_cost_diagonal(g);
    const abq::BiasField zero{std::vector<double>(6, 0.0)};
    const auto ours = abq::evolve(d, sched, zero);

    auto flipped = abq::test::plain_qaoa_evolve(g, negated, true);
    for (std::size_t z = 0; z < flipped.size(); ++z)
        if (std::popcount(z) % 2 == 1) flipped[z] = -flipped[z];

    for (std::size_t z = 0; z < flipped.size(); ++z)
        CHECK(std::abs(ours.amps[z] - flipped[z]) <= 1e-13);
}

TEST_CASE("expect_cost on basis states returns the diagonal") {
    const auto g = abq::generate_regular_graph(4, 3, true, 8);
    const auto d = abq::build_cost_diagonal(g);
    for (std::size_t z = 0; z < d.values.size(); ++z) {
        abq::StateVector sv;
        sv.n = 4;
        sv.amps.assign(16, {0.0, 0.0});
        sv.amps[z] = {1.0, 0.0};
        CHECK(abq::expect_cost(sv, d) == d.values[z]);
    }
}

TEST_CASE("expect_z_all on basis and symmetric states") {
    abq::StateVector sv;
    sv.n = 3;
    sv.amps.assign(8, {0.0, 0.0});
    sv.amps[0b101] = {0.0, 1.0};  // qubits 0 and 2 set
    const auto z = abq::expect_z_all(sv);
    CHECK(z[0] == -1.0);
    CHECK(z[1] == 1.0);
    CHECK(z[2] == -1.0);

    const auto uniform = abq::initial_state(abq::BiasField{std::vector<double>(3, 0.0)});
    for (double v : abq::expect_z_all(uniform)) CHECK(std::abs(v) <= 1e-15);
}

TEST_CASE("expect_z_all matches the single-qubit closed form h/sqrt(1+h^2)") {
    const std::vector<double> h = {0.3, -1.7, 2.4, 0.0};
    const auto sv = abq::initial_state(abq::BiasField{h});
    const auto z = abq::expect_z_all(sv);
    for (std::size_t j = 0; j < h.size(); ++j)
        CHECK(z[j] == doctest::Approx(h[j] / std::sqrt(1.0 + h[j] * h[j]))
                          .epsilon(1e-12));
}

TEST_CASE("fidelity of the uniform state is degeneracy / 2^n") {
    const auto g = abq::generate_regular_graph(8, 3, false, 4);
    const auto d = abq::build_cost_diagonal(g);
    const auto sol = abq::solve_exact(d);
    const auto sv = abq::initial_state(abq::BiasField{std::vector<double>(8, 0.0)});
    const double expected =
        static_cast<double>(sol.degeneracy) / static_cast<double>(sv.amps.size());
    CHECK(abq::fidelity_to_manifold(sv, sol) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("sampling reproduces expectations within statistical error") {
    const auto g = abq::generate_regular_graph(6, 3, true, 15);
    const auto d = abq::build_cost_diagonal(g);
    const abq::Schedule sched{{0.6}, {0.25}};
    std::vector<double> bias(6, 0.4);
    const auto sv = abq::evolve(d, sched, abq::BiasField{bias});

    const std::uint64_t shots = 40000;
    const auto samples = abq::sample_bitstrings(sv, shots, 777);
    REQUIRE(samples.size() == shots);

    const auto exact_z = abq::expect_z_all(sv);
    const auto est_z = abq::estimate_z_from_samples(samples, 6);
    const double z_bound = 5.0 / std::sqrt(static_cast<double>(shots));
    for (std::size_t j = 0; j < 6; ++j)
        CHECK(std::abs(est_z[j] - exact_z[j]) <= z_bound);

    const double exact_e = abq::expect_cost(sv, d);
    const double est_e = abq::estimate_cost_from_samples(samples, d);
    // The diagonal is bounded by e0, so 5 e0 / sqrt(shots) is a safe bound.
    CHECK(std::abs(est_e - exact_e) <= 5.0 * d.e0 / std::sqrt(static_cast<double>(shots)));
}

TEST_CASE("sampling is deterministic in the seed") {
    const auto sv = random_state(5, 42);
    const auto a = abq::sample_bitstrings(sv, 1000, 3);
    const auto b = abq::sample_bitstrings(sv, 1000, 3);
    CHECK(a == b);
    const auto c = abq::sample_bitstrings(sv, 1000, 4);
    CHECK(a != c);
}

TEST_CASE("statevector dump round-trips bit-identically") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "abq-svec-roundtrip";
    fs::create_directories(dir);
    const auto sv = random_state(6, 9);
    const fs::path file = dir / "state.svec";
    abq::write_statevector(sv, file);
    const auto back = abq::read_statevector(file);
    CHECK(back.n == sv.n);
    REQUIRE(back.amps.size() == sv.amps.size());
    CHECK(std::memcmp(back.amps.data(), sv.amps.data(),
                      sv.amps.size() * sizeof(sv.amps[0])) == 0);
    fs::remove_all(dir);
}

TEST_CASE("read_statevector rejects non-power-of-two files") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "abq-svec-bad";
    fs::create_directories(dir);
    const fs::path file = dir / "bad.svec";
    std::vector<char> bytes(48, 0);  // 3 complex doubles
    {
        std::ofstream out(file, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    CHECK_THROWS_AS(abq::read_statevector(file), abq::IoError);
    fs::remove_all(dir);
}

TEST_CASE("dimension mismatches are rejected") {
    const auto g = abq::generate_regular_graph(4, 3, false, 2);
    const auto d = abq::build_cost_diagonal(g);
    auto sv = random_state(5, 1);
    CHECK_THROWS_AS(abq::apply_cost_phase(sv, d, 0.1), abq::ConfigError);
    CHECK_THROWS_AS(abq::expect_cost(sv, d), abq::ConfigError);
    CHECK_THROWS_AS(abq::apply_mixer(sv, abq::BiasField{{0.0, 0.0}}, 0.1),
                    abq::ConfigError);
    CHECK_THROWS_AS(
        abq::evolve(d, abq::Schedule{{0.1}, {0.1}}, abq::BiasField{{0.0, 0.0}}),
        abq::ConfigError);
    CHECK_THROWS_AS(abq::evolve(d, abq::Schedule{{0.1}, {0.1, 0.2}},
                                abq::BiasField{std::vector<double>(4, 0.0)}),
                    abq::ConfigError);
}

}  // TEST_SUITE
