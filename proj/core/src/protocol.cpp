#include "abq/protocol.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "abq/cost.hpp"
#include "abq/errors.hpp"
#include "abq/metrics.hpp"
#include "abq/rng.hpp"

namespace abq {

namespace {

void validate_protocol_config(const ProtocolConfig& cfg) {
    if (cfg.target_p == 0) throw ConfigError("target_p must be positive");
    if (cfg.restarts == 0) throw ConfigError("restarts must be positive");
    if (!(cfg.alpha >= 0.0)) throw ConfigError("alpha must be nonnegative");
    if (!(cfg.init_u_range > 0.0) || !(cfg.init_v_range > 0.0))
        throw ConfigError("coefficient seeding ranges must be positive");
}

void run_indexed(const Executor& executor, std::size_t count,
                 const std::function<void(std::size_t)>& body) {
    if (executor) {
        executor(count, body);
    } else {
        for (std::size_t i = 0; i < count; ++i) body(i);
    }
}

}  // namespace

std::string_view to_string(Mode mode) {
    return mode == Mode::standard ? "standard" : "adaptive";
}

Mode mode_from_string(std::string_view text) {
    if (text == "standard") return Mode::standard;
    if (text == "adaptive" || text == "adaptive-bias" || text == "adaptive_bias")
        return Mode::adaptive_bias;
    throw ConfigError("unknown mode '" + std::string(text) +
                      "' (expected 'standard' or 'adaptive')");
}

std::vector<VariationalPoint> seed_level1(const ProtocolConfig& cfg, std::uint32_t n,
                                          std::string_view graph_id) {
    validate_protocol_config(cfg);
    if (n == 0) throw ConfigError("seed_level1 needs at least one qubit");

    const double h0 = cfg.mode == Mode::adaptive_bias ? 1.0 : 0.0;
    std::vector<VariationalPoint> points;
    points.reserve(cfg.restarts);
    for (std::uint32_t s = 0; s < cfg.restarts; ++s) {
        Rng rng(derive_stream(cfg.master_seed, graph_id, 1, s));
        VariationalPoint pt;
        pt.fourier.u = {rng.uniform(-cfg.init_u_range, cfg.init_u_range)};
        pt.fourier.v = {rng.uniform(-cfg.init_v_range, cfg.init_v_range)};
        pt.bias.h.assign(n, h0);
        points.push_back(std::move(pt));
    }
    return points;
}

std::vector<VariationalPoint> extend_points(const VariationalPoint& best,
                                            const ProtocolConfig& cfg,
                                            std::uint32_t next_level,
                                            std::string_view graph_id) {
    validate_protocol_config(cfg);
    const std::size_t p_prev = best.fourier.u.size();
    if (p_prev == 0 || best.fourier.v.size() != p_prev)
        throw ConfigError("extend_points needs a valid best point");
    if (next_level != p_prev + 1)
        throw ConfigError("extend_points: next level " + std::to_string(next_level) +
                          " does not follow level " + std::to_string(p_prev));

    std::vector<VariationalPoint> points;
    points.reserve(cfg.restarts);
    for (std::uint32_t s = 0; s < cfg.restarts; ++s) {
        VariationalPoint pt = best;
        if (s > 0) {
            // Relative perturbation a -> a + alpha a N(0,1); draws consume
            // the restart's stream in the fixed order u, v, h.
            Rng rng(derive_stream(cfg.master_seed, graph_id, next_level, s));
            for (double& a : pt.fourier.u) a += cfg.alpha * a * rng.normal();
            for (double& a : pt.fourier.v) a += cfg.alpha * a * rng.normal();
            for (double& a : pt.bias.h) a += cfg.alpha * a * rng.normal();
        }
        pt.fourier.u.push_back(0.0);
        pt.fourier.v.push_back(0.0);
        points.push_back(std::move(pt));
    }
    return points;
}

std::size_t best_restart_index(std::span<const double> final_energies) {
    std::size_t best = final_energies.size();
    for (std::size_t i = 0; i < final_energies.size(); ++i) {
        if (std::isnan(final_energies[i])) continue;
        if (best == final_energies.size() || final_energies[i] < final_energies[best])
            best = i;
    }
    if (best == final_energies.size())
        throw NumericalError("no successful restart to select from");
    return best;
}

LevelRecord run_level(std::span<const VariationalPoint> points, const CostDiagonal& cost,
                      const ExactSolution& solution, const ProtocolConfig& cfg,
                      std::uint32_t level, const Executor& executor) {
    validate_protocol_config(cfg);
    if (points.empty()) throw ConfigError("run_level needs at least one starting point");
    for (const VariationalPoint& pt : points)
        if (pt.fourier.u.size() != level)
            throw ConfigError("starting point depth " +
                              std::to_string(pt.fourier.u.size()) +
                              " does not match level " + std::to_string(level));

    OptimizerConfig opt_cfg = cfg.optimizer;
    if (cfg.mode == Mode::standard) opt_cfg.ell = 0.0;

    const std::size_t count = points.size();
    std::vector<std::optional<InnerLoopResult>> results(count);
    std::vector<std::string> errors(count);
    run_indexed(executor, count, [&](std::size_t s) {
        try {
            results[s] =
                inner_loop(points[s], cost, &solution, opt_cfg, cfg.record_traces);
        } catch (const NumericalError& e) {
            errors[s] = e.what();
        }
    });

    std::vector<double> energies(count, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t s = 0; s < count; ++s)
        if (results[s]) energies[s] = results[s]->e_f;

    std::size_t best;
    try {
        best = best_restart_index(energies);
    } catch (const NumericalError&) {
        std::string first_error;
        for (const std::string& e : errors)
            if (!e.empty()) {
                first_error = e;
                break;
            }
        throw NumericalError("level " + std::to_string(level) +
                             ": all restarts failed; first error: " + first_error);
    }

    LevelRecord rec;
    rec.level = level;
    rec.best_point = results[best]->point;
    rec.e_best = results[best]->e_f;
    rec.e_opt = cost.e0 - rec.e_best;
    rec.e_max = solution.e_max;
    rec.r = accuracy(rec.e_opt, solution.e_max);
    const StateVector final_state =
        evolve(cost, to_schedule(rec.best_point.fourier), rec.best_point.bias);
    rec.f = fidelity_to_manifold(final_state, solution);
    if (cfg.record_traces) rec.best_trace = std::move(results[best]->trace);

    double ite_sum = 0.0;
    std::size_t ite_count = 0;
    rec.restarts.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        RestartSummary summary;
        summary.restart = static_cast<std::uint32_t>(s);
        if (results[s]) {
            summary.e_f = results[s]->e_f;
            summary.n_ite = results[s]->n_ite;
            ite_sum += results[s]->n_ite;
            ++ite_count;
        } else {
            summary.failed = true;
            summary.error = errors[s];
            summary.e_f = std::numeric_limits<double>::quiet_NaN();
        }
        rec.restarts.push_back(std::move(summary));
    }
    rec.n_ite_mean = ite_sum / static_cast<double>(ite_count);
    return rec;
}

std::vector<LevelRecord> run_sweep(const GraphInstance& g, const ProtocolConfig& cfg,
                                   const Executor& executor) {
    validate_protocol_config(cfg);
    const CostDiagonal cost = build_cost_diagonal(g);
    const ExactSolution solution = solve_exact(cost);

    std::vector<VariationalPoint> points = seed_level1(cfg, g.n, g.id);
    std::vector<LevelRecord> records;
    records.reserve(cfg.target_p);
    for (std::uint32_t level = 1; level <= cfg.target_p; ++level) {
        records.push_back(run_level(points, cost, solution, cfg, level, executor));
        if (level < cfg.target_p)
            points = extend_points(records.back().best_point, cfg, level + 1, g.id);
    }
    return records;
}

}  // namespace abq
