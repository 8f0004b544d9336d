#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "abq/cost.hpp"
#include "abq/schedule.hpp"
#include "abq/statevector.hpp"

namespace abq {

/// One candidate of the classical search: Fourier coefficients plus the
/// per-qubit bias fields that shape both the mixer and the initial state.
struct VariationalPoint {
    FourierPoint fourier;
    BiasField bias;
};

struct OptimizerConfig {
    /// Forward-difference step for the (u, v) gradient.
    double eps_g = 1e-4;
    double adam_rate = 0.01;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    /// Bias feedback rate; 0 freezes the bias fields entirely (the plain
    /// transverse-mixer algorithm when the fields start at zero).
    double ell = 1.1;
    /// Convergence threshold on |E_t - E_{t-1}|.
    double tol = 1e-6;
    std::uint32_t max_iter = 1000;
    /// Clip bound applied after every bias update.
    double h_max = kDefaultHMax;
    /// Validation mode: central differences instead of forward. Doubles the
    /// evaluation count per iteration; off in production.
    bool central_diff = false;
    /// When nonzero, <Z_j> for the bias update is estimated from this many
    /// computational-basis samples instead of the exact statevector.
    std::uint64_t sample_shots = 0;
    /// Base seed for the sampling mode's shot streams.
    std::uint64_t sample_seed = 0;
};

/// Adam accumulators for one optimization run.
struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::uint64_t step = 0;

    explicit AdamState(std::size_t dim) : m(dim, 0.0), v(dim, 0.0) {}
};

/// One bias-corrected Adam update; params is modified in place and grad must
/// have the same length. A zero gradient leaves params unchanged.
void adam_step(AdamState& state, const OptimizerConfig& cfg, std::span<const double> grad,
               std::span<double> params);

/// Bias feedback h' = h - ell (h - <Z>), clipped to [-h_max, h_max] with a
/// warning on stderr when the clip engages. ell = 0 returns h bit-identically.
BiasField update_bias(const BiasField& bias, std::span<const double> z_expect, double ell,
                      double h_max = kDefaultHMax);

/// <H_C> of the circuit defined by the point (schedule expansion, evolution,
/// expectation).
double energy_of_point(const VariationalPoint& point, const CostDiagonal& cost);

struct UvGradient {
    std::vector<double> du;
    std::vector<double> dv;
    double base_energy = 0.0;
    /// Energy evaluations consumed: 2p + 1 forward, 4p + 1 central.
    std::uint64_t evaluations = 0;
};

/// Energy functional over Fourier points; tests inject closed-form
/// evaluators here to pin the difference scheme and the evaluation count.
using FourierEnergyFn = std::function<double(const FourierPoint&)>;

/// Finite-difference gradient with respect to every u_l and v_l.
UvGradient gradient_uv_with(const FourierPoint& point, const FourierEnergyFn& energy,
                            double eps_g, bool central = false);

/// Same, with the energy given by the quantum circuit at the point's bias.
UvGradient gradient_uv(const VariationalPoint& point, const CostDiagonal& cost, double eps_g,
                       bool central = false);

/// One recorded optimization step: the energy and bias fields after the
/// update, plus the ground-manifold fidelity when an exact solution was
/// supplied (NaN otherwise).
struct TraceRow {
    std::uint32_t iteration = 0;
    double energy = 0.0;
    double fidelity = 0.0;
    std::vector<double> h;
};

struct InnerLoopResult {
    /// Final parameters (Fourier coefficients and bias fields).
    VariationalPoint point;
    /// Final energy <H_C>.
    double e_f = 0.0;
    /// Iterations executed.
    std::uint32_t n_ite = 0;
    /// Total energy evaluations; 1 + n_ite * (2p + 1) in forward mode, since
    /// each iteration's post-update energy doubles as the next iteration's
    /// finite-difference base.
    std::uint64_t energy_evaluations = 0;
    /// Per-iteration record; filled only when requested.
    std::vector<TraceRow> trace;
};

/// Fixed-level optimization. Per iteration: finite-difference gradient of
/// the energy in (u, v) around the cached base state, one Adam update, one
/// bias-feedback update from the base state's <Z_j>, then a fresh evaluation
/// that is recorded and reused as the next base. Stops when the recorded
/// energy changes by less than tol between iterations, or at max_iter.
/// Throws NumericalError (with the offending parameters in the message) if
/// any evaluated energy is non-finite.
InnerLoopResult inner_loop(const VariationalPoint& init, const CostDiagonal& cost,
                           const ExactSolution* solution, const OptimizerConfig& cfg,
                           bool record_trace = false);

}  // namespace abq
