#include "abq/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "abq/errors.hpp"
#include "abq/numeric.hpp"
#include "abq/rng.hpp"

namespace abq {

namespace {

void check_qubit_match(const StateVector& sv, std::uint32_t n, const char* what) {
    if (sv.n != n)
        throw ConfigError(std::string(what) + ": statevector has " +
                          std::to_string(sv.n) + " qubits, operand has " +
                          std::to_string(n));
    if (sv.amps.size() != (std::size_t{1} << sv.n))
        throw ConfigError(std::string(what) + ": statevector size is not 2^n");
}

}  // namespace

void validate_bias(const BiasField& bias, double h_max) {
    for (double h : bias.h) {
        if (!std::isfinite(h))
            throw ConfigError("bias field is not finite");
        if (std::abs(h) > h_max)
            throw ConfigError("bias field magnitude " + format_double(std::abs(h)) +
                              " exceeds the bound " + format_double(h_max));
    }
}

StateVector initial_state(const BiasField& bias) {
    validate_bias(bias);
    const std::uint32_t n = static_cast<std::uint32_t>(bias.h.size());
    if (n == 0) throw ConfigError("initial state needs at least one qubit");

    StateVector sv;
    sv.n = n;
    sv.amps.assign(std::size_t{1} << n, {0.0, 0.0});
    sv.amps[0] = {1.0, 0.0};
    // Product state built by doubling: qubit j's ground state of (X - h Z)
    // has real amplitudes (1, h - w) / sqrt(1 + (w - h)^2), w = sqrt(1 + h^2).
    std::size_t filled = 1;
    for (std::uint32_t j = 0; j < n; ++j) {
        const double h = bias.h[j];
        const double w = std::sqrt(1.0 + h * h);
        const double excess = w - h;
        const double scale = 1.0 / std::sqrt(1.0 + excess * excess);
        const double a0 = scale;
        const double a1 = -excess * scale;
        for (std::size_t z = 0; z < filled; ++z) {
            sv.amps[z + filled] = sv.amps[z] * a1;
            sv.amps[z] *= a0;
        }
        filled <<= 1;
    }
    return sv;
}

void apply_cost_phase(StateVector& sv, const CostDiagonal& cost, double gamma) {
    check_qubit_match(sv, cost.n, "apply_cost_phase");
    const std::size_t dim = sv.amps.size();
    for (std::size_t z = 0; z < dim; ++z) {
        const double phi = gamma * cost.values[z];
        const double c = std::cos(phi);
        const double s = std::sin(phi);
        const double re = sv.amps[z].real();
        const double im = sv.amps[z].imag();
        // Multiply by exp(-i phi) = c - i s.
        sv.amps[z] = {re * c + im * s, im * c - re * s};
    }
}

void apply_mixer(StateVector& sv, const BiasField& bias, double beta) {
    check_qubit_match(sv, static_cast<std::uint32_t>(bias.h.size()), "apply_mixer");
    validate_bias(bias);
    const std::size_t dim = sv.amps.size();
    for (std::uint32_t j = 0; j < sv.n; ++j) {
        const double h = bias.h[j];
        const double w = std::sqrt(1.0 + h * h);
        const double theta = beta * w;
        const double c = std::cos(theta);
        const double s = std::sin(theta) / w;
        const double hs = h * s;
        // exp(-i beta (X - h Z)) = [[c + i h s, -i s], [-i s, c - i h s]]
        // with s = sin(beta w)/w; written out on (re, im) pairs.
        const std::size_t bit = std::size_t{1} << j;
        for (std::size_t base = 0; base < dim; base += bit << 1) {
            for (std::size_t i0 = base; i0 < base + bit; ++i0) {
                const std::size_t i1 = i0 | bit;
                const double a0r = sv.amps[i0].real();
                const double a0i = sv.amps[i0].imag();
                const double a1r = sv.amps[i1].real();
                const double a1i = sv.amps[i1].imag();
                sv.amps[i0] = {c * a0r - hs * a0i + s * a1i,
                               c * a0i + hs * a0r - s * a1r};
                sv.amps[i1] = {s * a0i + c * a1r + hs * a1i,
                               -s * a0r + c * a1i - hs * a1r};
            }
        }
    }
}

StateVector evolve(const CostDiagonal& cost, const Schedule& schedule,
                   const BiasField& bias) {
    if (schedule.gammas.size() != schedule.betas.size())
        throw ConfigError("schedule has " + std::to_string(schedule.gammas.size()) +
                          " gammas but " + std::to_string(schedule.betas.size()) +
                          " betas");
    if (bias.h.size() != cost.n)
        throw ConfigError("bias field has " + std::to_string(bias.h.size()) +
                          " entries for " + std::to_string(cost.n) + " qubits");
    StateVector sv = initial_state(bias);
    for (std::size_t k = 0; k < schedule.gammas.size(); ++k) {
        apply_cost_phase(sv, cost, schedule.gammas[k]);
        apply_mixer(sv, bias, schedule.betas[k]);
    }
    return sv;
}

double expect_cost(const StateVector& sv, const CostDiagonal& cost) {
    check_qubit_match(sv, cost.n, "expect_cost");
    return pairwise_sum(0, sv.amps.size(), [&](std::size_t z) {
        const double re = sv.amps[z].real();
        const double im = sv.amps[z].imag();
        return (re * re + im * im) * cost.values[z];
    });
}

std::vector<double> expect_z_all(const StateVector& sv) {
    std::vector<double> z_expect(sv.n, 0.0);
    for (std::uint32_t j = 0; j < sv.n; ++j) {
        const std::size_t bit = std::size_t{1} << j;
        z_expect[j] = pairwise_sum(0, sv.amps.size(), [&](std::size_t z) {
            const double re = sv.amps[z].real();
            const double im = sv.amps[z].imag();
            const double p = re * re + im * im;
            return (z & bit) ? -p : p;
        });
    }
    return z_expect;
}

double fidelity_to_manifold(const StateVector& sv, const ExactSolution& solution) {
    return pairwise_sum(0, solution.ground_bitstrings.size(), [&](std::size_t i) {
        const std::uint64_t z = solution.ground_bitstrings[i];
        if (z >= sv.amps.size())
            throw ConfigError("ground bitstring outside the statevector range");
        const double re = sv.amps[z].real();
        const double im = sv.amps[z].imag();
        return re * re + im * im;
    });
}

double norm(const StateVector& sv) {
    return std::sqrt(pairwise_sum(0, sv.amps.size(), [&](std::size_t z) {
        const double re = sv.amps[z].real();
        const double im = sv.amps[z].imag();
        return re * re + im * im;
    }));
}

std::vector<std::uint64_t> sample_bitstrings(const StateVector& sv, std::uint64_t shots,
                                             std::uint64_t rng_seed) {
    std::vector<double> cumulative(sv.amps.size());
    double acc = 0.0;
    for (std::size_t z = 0; z < sv.amps.size(); ++z) {
        const double re = sv.amps[z].real();
        const double im = sv.amps[z].imag();
        acc += re * re + im * im;
        cumulative[z] = acc;
    }
    if (!(acc > 0.0)) throw NumericalError("cannot sample from a zero statevector");

    Rng rng(rng_seed);
    std::vector<std::uint64_t> samples;
    samples.reserve(shots);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double x = rng.uniform() * acc;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
        const std::size_t z = static_cast<std::size_t>(
            std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                     static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
        samples.push_back(z);
    }
    return samples;
}

std::vector<double> estimate_z_from_samples(std::span<const std::uint64_t> samples,
                                            std::uint32_t n) {
    if (samples.empty()) throw ConfigError("cannot estimate <Z> from zero samples");
    std::vector<double> z_expect(n, 0.0);
    for (std::uint64_t z : samples)
        for (std::uint32_t j = 0; j < n; ++j)
            z_expect[j] += ((z >> j) & 1u) ? -1.0 : 1.0;
    for (double& v : z_expect) v /= static_cast<double>(samples.size());
    return z_expect;
}

double estimate_cost_from_samples(std::span<const std::uint64_t> samples,
                                  const CostDiagonal& cost) {
    if (samples.empty()) throw ConfigError("cannot estimate <H_C> from zero samples");
    const double total = pairwise_sum(0, samples.size(), [&](std::size_t i) {
        const std::uint64_t z = samples[i];
        if (z >= cost.values.size())
            throw ConfigError("sample outside the cost diagonal range");
        return cost.values[z];
    });
    return total / static_cast<double>(samples.size());
}

void write_statevector(const StateVector& sv, const std::filesystem::path& path) {
    static_assert(std::endian::native == std::endian::little,
                  "statevector dumps are defined as little-endian");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write statevector file: " + path.string());
    out.write(reinterpret_cast<const char*>(sv.amps.data()),
              static_cast<std::streamsize>(sv.amps.size() * sizeof(std::complex<double>)));
    if (!out) throw IoError("write failed: " + path.string());
}

StateVector read_statevector(const std::filesystem::path& path) {
    std::error_code ec;
    const std::uintmax_t bytes = std::filesystem::file_size(path, ec);
    if (ec) throw IoError("cannot stat statevector file: " + path.string());
    const std::uintmax_t count = bytes / sizeof(std::complex<double>);
    if (count == 0 || count * sizeof(std::complex<double>) != bytes ||
        !std::has_single_bit(count))
        throw IoError("statevector file size is not a power-of-two number of "
                      "complex doubles: " +
                      path.string());

    StateVector sv;
    sv.n = static_cast<std::uint32_t>(std::bit_width(count) - 1);
    sv.amps.resize(static_cast<std::size_t>(count));
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open statevector file: " + path.string());
    in.read(reinterpret_cast<char*>(sv.amps.data()), static_cast<std::streamsize>(bytes));
    if (!in) throw IoError("read failed: " + path.string());
    return sv;
}

}  // namespace abq
