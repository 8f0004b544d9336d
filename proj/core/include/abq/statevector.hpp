#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "abq/cost.hpp"
#include "abq/schedule.hpp"

namespace abq {

/// Default clip bound for the per-qubit bias fields.
inline constexpr double kDefaultHMax = 10.0;

/// Per-qubit longitudinal bias fields h_j. The all-zero field reduces every
/// operation here to the plain transverse-field case.
struct BiasField {
    std::vector<double> h;
};

/// Throws ConfigError when a field is non-finite or exceeds h_max in
/// magnitude.
void validate_bias(const BiasField& bias, double h_max = kDefaultHMax);

/// Full complex statevector over n qubits. amps[z] is the amplitude of the
/// computational basis state whose bit j (of the index z) gives qubit j.
struct StateVector {
    std::uint32_t n = 0;
    std::vector<std::complex<double>> amps;

    std::size_t size() const { return amps.size(); }
};

/// Product of the single-qubit ground states of (X_j - h_j Z_j): for each
/// qubit the state (1, h - w) / sqrt(1 + (w - h)^2) with w = sqrt(1 + h^2).
/// With h = 0 this is |-> on every qubit.
StateVector initial_state(const BiasField& bias);

/// Applies exp(-i gamma H_C) by phasing each amplitude with its diagonal
/// cost entry.
void apply_cost_phase(StateVector& sv, const CostDiagonal& cost, double gamma);

/// Applies exp(-i beta (X_j - h_j Z_j)) on every qubit j. Per qubit this is
/// the exact 2x2 unitary cos(beta w) I - i sin(beta w) (X - h Z)/w with
/// w = sqrt(1 + h^2).
void apply_mixer(StateVector& sv, const BiasField& bias, double beta);

/// Full circuit: initial state, then per layer the cost phase followed by
/// the mixer, first layer first.
StateVector evolve(const CostDiagonal& cost, const Schedule& schedule, const BiasField& bias);

/// <H_C> = sum_z |amps[z]|^2 values[z], pairwise-summed.
double expect_cost(const StateVector& sv, const CostDiagonal& cost);

/// <Z_j> for every qubit, pairwise-summed.
std::vector<double> expect_z_all(const StateVector& sv);

/// Squared overlap with the ground manifold: sum over ground bitstrings of
/// |amps[z]|^2.
double fidelity_to_manifold(const StateVector& sv, const ExactSolution& solution);

double norm(const StateVector& sv);

/// Draws computational-basis samples from |amps|^2.
std::vector<std::uint64_t> sample_bitstrings(const StateVector& sv, std::uint64_t shots,
                                             std::uint64_t rng_seed);

/// Per-qubit <Z_j> estimated from a shot record.
std::vector<double> estimate_z_from_samples(std::span<const std::uint64_t> samples,
                                            std::uint32_t n);

/// <H_C> estimated from a shot record.
double estimate_cost_from_samples(std::span<const std::uint64_t> samples,
                                  const CostDiagonal& cost);

/// Raw little-endian binary dump: 2^n complex<double> values (interleaved
/// re, im). The qubit count is recovered from the file size on read.
void write_statevector(const StateVector& sv, const std::filesystem::path& path);
StateVector read_statevector(const std::filesystem::path& path);

}  // namespace abq
