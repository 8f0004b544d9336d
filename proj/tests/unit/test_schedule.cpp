#include <doctest.h>

#include <cmath>
#include <numbers>

#include "abq/errors.hpp"
#include "abq/schedule.hpp"

TEST_SUITE("schedule") {

TEST_CASE("level 1 reduces to gamma = u/sqrt(2), beta = v/sqrt(2)") {
    const abq::FourierPoint fp{{0.7}, {-0.3}};
    const auto sched = abq::to_schedule(fp);
    REQUIRE(sched.gammas.size() == 1);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(sched.gammas[0] == doctest::Approx(0.7 * inv_sqrt2).epsilon(1e-15));
    CHECK(sched.betas[0] == doctest::Approx(-0.3 * inv_sqrt2).epsilon(1e-15));
}

TEST_CASE("expansion matches a direct long-double recomputation") {
    const abq::FourierPoint fp{{0.4, -1.1, 0.25}, {0.9, 0.05, -0.6}};
    const auto sched = abq::to_schedule(fp);
    const std::size_t p = 3;
    REQUIRE(sched.gammas.size() == p);
    for (std::size_t k = 1; k <= p; ++k) {
        long double gamma = 0.0L;
        long double beta = 0.0L;
        for (std::size_t l = 1; l <= p; ++l) {
            const long double phase = (static_cast<long double>(l) - 0.5L) *
                                      (static_cast<long double>(k) - 0.5L) *
                                      std::numbers::pi_v<long double> /
                                      static_cast<long double>(p);
            gamma += static_cast<long double>(fp.u[l - 1]) * std::sin(phase);
            beta += static_cast<long double>(fp.v[l - 1]) * std::cos(phase);
        }
        CHECK(sched.gammas[k - 1] ==
              doctest::Approx(static_cast<double>(gamma)).epsilon(1e-13));
        CHECK(sched.betas[k - 1] ==
              doctest::Approx(static_cast<double>(beta)).epsilon(1e-13));
    }
}

TEST_CASE("expansion is linear in the coefficients") {
    const abq::FourierPoint fp{{0.4, -1.1}, {0.9, 0.05}};
    abq::FourierPoint scaled = fp;
    for (double& x : scaled.u) x *= 3.0;
    for (double& x : scaled.v) x *= 3.0;
    const auto base = abq::to_schedule(fp);
    const auto tripled = abq::to_schedule(scaled);
    for (std::size_t k = 0; k < base.gammas.size(); ++k) {
        CHECK(tripled.gammas[k] == doctest::Approx(3.0 * base.gammas[k]).epsilon(1e-14));
        CHECK(tripled.betas[k] == doctest::Approx(3.0 * base.betas[k]).epsilon(1e-14));
    }
}

TEST_CASE("appending a zero coefficient at the same depth changes nothing "
          "only in the trivial sense") {
    // A trailing zero changes the depth (one more layer), not the values of
    // the existing sums; this documents that extension reshapes the whole
    // schedule rather than appending an identity layer.
    const abq::FourierPoint two{{0.5, 0.0}, {0.2, 0.0}};
    const auto sched = abq::to_schedule(two);
    CHECK(sched.gammas.size() == 2);
}

TEST_CASE("malformed points are rejected") {
    CHECK_THROWS_AS(abq::to_schedule(abq::FourierPoint{{}, {}}), abq::ConfigError);
    CHECK_THROWS_AS(abq::to_schedule(abq::FourierPoint{{0.1}, {0.1, 0.2}}),
                    abq::ConfigError);
}

}  // TEST_SUITE
