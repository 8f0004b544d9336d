#include "abq/optimizer.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "abq/errors.hpp"
#include "abq/numeric.hpp"
#include "abq/rng.hpp"

namespace abq {

namespace {

void validate_optimizer_config(const OptimizerConfig& cfg) {
    if (!(cfg.eps_g > 0.0)) throw ConfigError("eps_g must be positive");
    if (!(cfg.adam_rate > 0.0)) throw ConfigError("adam_rate must be positive");
    if (!(cfg.adam_beta1 >= 0.0 && cfg.adam_beta1 < 1.0))
        throw ConfigError("adam_beta1 must lie in [0, 1)");
    if (!(cfg.adam_beta2 >= 0.0 && cfg.adam_beta2 < 1.0))
        throw ConfigError("adam_beta2 must lie in [0, 1)");
    if (!(cfg.adam_eps > 0.0)) throw ConfigError("adam_eps must be positive");
    if (!(cfg.ell >= 0.0)) throw ConfigError("ell must be nonnegative");
    if (!(cfg.tol > 0.0)) throw ConfigError("tol must be positive");
    if (cfg.max_iter == 0) throw ConfigError("max_iter must be positive");
    if (!(cfg.h_max > 0.0)) throw ConfigError("h_max must be positive");
}

std::string describe_point(const VariationalPoint& point) {
    std::ostringstream oss;
    oss << "u = [";
    for (std::size_t i = 0; i < point.fourier.u.size(); ++i)
        oss << (i ? ", " : "") << format_double(point.fourier.u[i]);
    oss << "], v = [";
    for (std::size_t i = 0; i < point.fourier.v.size(); ++i)
        oss << (i ? ", " : "") << format_double(point.fourier.v[i]);
    oss << "], h = [";
    for (std::size_t i = 0; i < point.bias.h.size(); ++i)
        oss << (i ? ", " : "") << format_double(point.bias.h[i]);
    oss << "]";
    return oss.str();
}

}  // namespace

void adam_step(AdamState& state, const OptimizerConfig& cfg, std::span<const double> grad,
               std::span<double> params) {
    if (grad.size() != params.size() || grad.size() != state.m.size())
        throw ConfigError("adam_step dimension mismatch");
    ++state.step;
    const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < grad.size(); ++i) {
        state.m[i] = cfg.adam_beta1 * state.m[i] + (1.0 - cfg.adam_beta1) * grad[i];
        state.v[i] = cfg.adam_beta2 * state.v[i] + (1.0 - cfg.adam_beta2) * grad[i] * grad[i];
        const double m_hat = state.m[i] / bc1;
        const double v_hat = state.v[i] / bc2;
        params[i] -= cfg.adam_rate * m_hat / (std::sqrt(v_hat) + cfg.adam_eps);
    }
}

BiasField update_bias(const BiasField& bias, std::span<const double> z_expect, double ell,
                      double h_max) {
    if (z_expect.size() != bias.h.size())
        throw ConfigError("update_bias dimension mismatch");
    if (ell == 0.0) return bias;
    BiasField next = bias;
    for (std::size_t j = 0; j < next.h.size(); ++j) {
        double h = next.h[j] - ell * (next.h[j] - z_expect[j]);
        if (std::abs(h) > h_max) {
            std::cerr << "abq: bias field " << j << " clipped from " << format_double(h)
                      << " to +/-" << format_double(h_max) << "\n";
            h = std::copysign(h_max, h);
        }
        next.h[j] = h;
    }
    return next;
}

double energy_of_point(const VariationalPoint& point, const CostDiagonal& cost) {
    const StateVector sv = evolve(cost, to_schedule(point.fourier), point.bias);
    return expect_cost(sv, cost);
}

UvGradient gradient_uv_with(const FourierPoint& point, const FourierEnergyFn& energy,
                            double eps_g, bool central) {
    if (!(eps_g > 0.0)) throw ConfigError("eps_g must be positive");
    const std::size_t p = point.u.size();
    if (p == 0 || point.v.size() != p)
        throw ConfigError("gradient needs matched, nonempty coefficient vectors");

    UvGradient g;
    g.du.assign(p, 0.0);
    g.dv.assign(p, 0.0);
    g.base_energy = energy(point);
    g.evaluations = 1;

    FourierPoint probe = point;
    auto diff = [&](double& coeff, double base_value) {
        const double saved = coeff;
        coeff = saved + eps_g;
        const double e_plus = energy(probe);
        ++g.evaluations;
        double slope;
        if (central) {
            coeff = saved - eps_g;
            const double e_minus = energy(probe);
            ++g.evaluations;
            slope = (e_plus - e_minus) / (2.0 * eps_g);
        } else {
            slope = (e_plus - base_value) / eps_g;
        }
        coeff = saved;
        return slope;
    };
    for (std::size_t l = 0; l < p; ++l) g.du[l] = diff(probe.u[l], g.base_energy);
    for (std::size_t l = 0; l < p; ++l) g.dv[l] = diff(probe.v[l], g.base_energy);
    return g;
}

UvGradient gradient_uv(const VariationalPoint& point, const CostDiagonal& cost,
                       double eps_g, bool central) {
    return gradient_uv_with(
        point.fourier,
        [&](const FourierPoint& fp) {
            return energy_of_point(VariationalPoint{fp, point.bias}, cost);
        },
        eps_g, central);
}

InnerLoopResult inner_loop(const VariationalPoint& init, const CostDiagonal& cost,
                           const ExactSolution* solution, const OptimizerConfig& cfg,
                           bool record_trace) {
    validate_optimizer_config(cfg);
    const std::size_t p = init.fourier.u.size();
    if (p == 0 || init.fourier.v.size() != p)
        throw ConfigError("inner loop needs matched, nonempty coefficient vectors");
    if (init.bias.h.size() != cost.n)
        throw ConfigError("inner loop bias length " + std::to_string(init.bias.h.size()) +
                          " != qubit count " + std::to_string(cost.n));
    validate_bias(init.bias, cfg.h_max);

    InnerLoopResult result;
    result.point = init;
    VariationalPoint& pt = result.point;

    std::uint64_t evaluations = 0;
    auto evaluate = [&](const VariationalPoint& q) {
        StateVector sv = evolve(cost, to_schedule(q.fourier), q.bias);
        const double e = expect_cost(sv, cost);
        ++evaluations;
        if (!std::isfinite(e))
            throw NumericalError("non-finite energy after " + std::to_string(evaluations) +
                                 " evaluations at " + describe_point(q));
        return std::make_pair(e, std::move(sv));
    };

    // The post-update energy of each iteration is recorded for convergence
    // and reused as the next iteration's finite-difference base, so forward
    // mode consumes exactly 2p + 1 fresh evaluations per iteration.
    auto [e_base, base_state] = evaluate(pt);
    AdamState adam(2 * p);
    std::vector<double> grad_flat(2 * p);
    std::vector<double> params_flat(2 * p);

    if (record_trace) result.trace.reserve(cfg.max_iter);

    for (std::uint32_t t = 1; t <= cfg.max_iter; ++t) {
        result.n_ite = t;

        auto energy_at_bias = [&](const FourierPoint& fp) {
            StateVector sv = evolve(cost, to_schedule(fp), pt.bias);
            const double e = expect_cost(sv, cost);
            if (!std::isfinite(e))
                throw NumericalError("non-finite energy in gradient probe at iteration " +
                                     std::to_string(t) + ", " + describe_point(pt));
            return e;
        };
        FourierPoint probe = pt.fourier;
        for (std::size_t l = 0; l < p; ++l) {
            const double saved = probe.u[l];
            probe.u[l] = saved + cfg.eps_g;
            double e_plus = energy_at_bias(probe);
            ++evaluations;
            if (cfg.central_diff) {
                probe.u[l] = saved - cfg.eps_g;
                const double e_minus = energy_at_bias(probe);
                ++evaluations;
                grad_flat[l] = (e_plus - e_minus) / (2.0 * cfg.eps_g);
            } else {
                grad_flat[l] = (e_plus - e_base) / cfg.eps_g;
            }
            probe.u[l] = saved;
        }
        for (std::size_t l = 0; l < p; ++l) {
            const double saved = probe.v[l];
            probe.v[l] = saved + cfg.eps_g;
            double e_plus = energy_at_bias(probe);
            ++evaluations;
            if (cfg.central_diff) {
                probe.v[l] = saved - cfg.eps_g;
                const double e_minus = energy_at_bias(probe);
                ++evaluations;
                grad_flat[p + l] = (e_plus - e_minus) / (2.0 * cfg.eps_g);
            } else {
                grad_flat[p + l] = (e_plus - e_base) / cfg.eps_g;
            }
            probe.v[l] = saved;
        }

        // Bias feedback reads <Z_j> of the pre-update base state.
        std::vector<double> z_expect;
        if (cfg.ell != 0.0) {
            if (cfg.sample_shots > 0) {
                const std::uint64_t shot_seed =
                    derive_stream(cfg.sample_seed, "z-estimate", p, t);
                z_expect = estimate_z_from_samples(
                    sample_bitstrings(base_state, cfg.sample_shots, shot_seed), cost.n);
            } else {
                z_expect = expect_z_all(base_state);
            }
        }

        for (std::size_t l = 0; l < p; ++l) {
            params_flat[l] = pt.fourier.u[l];
            params_flat[p + l] = pt.fourier.v[l];
        }
        adam_step(adam, cfg, grad_flat, params_flat);
        for (std::size_t l = 0; l < p; ++l) {
            pt.fourier.u[l] = params_flat[l];
            pt.fourier.v[l] = params_flat[p + l];
        }
        if (cfg.ell != 0.0) pt.bias = update_bias(pt.bias, z_expect, cfg.ell, cfg.h_max);

        auto [e_next, next_state] = evaluate(pt);
        base_state = std::move(next_state);

        if (record_trace) {
            TraceRow row;
            row.iteration = t;
            row.energy = e_next;
            row.fidelity = solution ? fidelity_to_manifold(base_state, *solution)
                                    : std::numeric_limits<double>::quiet_NaN();
            row.h = pt.bias.h;
            result.trace.push_back(std::move(row));
        }

        const double change = std::abs(e_next - e_base);
        e_base = e_next;
        if (change < cfg.tol) break;
    }

    result.e_f = e_base;
    result.energy_evaluations = evaluations;
    return result;
}

}  // namespace abq
