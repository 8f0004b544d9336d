#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "abq/graph.hpp"
#include "abq/optimizer.hpp"

namespace abq {

/// standard: transverse mixer, zero bias fields, no feedback.
/// adaptive_bias: per-qubit bias fields initialized to 1 and fed back from
/// <Z_j> every iteration.
enum class Mode { standard, adaptive_bias };

std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view text);

/// Level-1 coefficient seeding ranges. gamma_1 = u_1 / sqrt(2) and
/// beta_1 = v_1 / sqrt(2), so these put gamma_1 in [-pi/2, pi/2] and beta_1
/// in [-pi/4, pi/4] -- one full period of the level-1 landscape.
inline constexpr double kInitURange = std::numbers::sqrt2 * std::numbers::pi / 2.0;
inline constexpr double kInitVRange = std::numbers::sqrt2 * std::numbers::pi / 4.0;

struct ProtocolConfig {
    Mode mode = Mode::adaptive_bias;
    /// Deepest level to run; levels 1..target_p execute in order.
    std::uint32_t target_p = 1;
    /// Restarts per level.
    std::uint32_t restarts = 10;
    /// Relative perturbation scale used when extending the level-p winner to
    /// level p+1.
    double alpha = 0.6;
    std::uint64_t master_seed = 0;
    double init_u_range = kInitURange;
    double init_v_range = kInitVRange;
    OptimizerConfig optimizer;
    /// Keep the winning restart's per-iteration trace in each LevelRecord.
    bool record_traces = false;
};

struct RestartSummary {
    std::uint32_t restart = 0;
    double e_f = 0.0;
    std::uint32_t n_ite = 0;
    bool failed = false;
    std::string error;
};

struct LevelRecord {
    std::uint32_t level = 0;
    VariationalPoint best_point;
    /// Best final <H_C> over the restarts.
    double e_best = 0.0;
    /// Cut value of the best restart, e0 - e_best.
    double e_opt = 0.0;
    /// Exact maximum cut value of the instance.
    double e_max = 0.0;
    /// Accuracy e_opt / e_max against the exact optimum.
    double r = 0.0;
    /// Ground-manifold fidelity of the best restart's final state.
    double f = 0.0;
    /// Mean iteration count over the successful restarts.
    double n_ite_mean = 0.0;
    std::vector<RestartSummary> restarts;
    /// Winning restart's trace; only when ProtocolConfig::record_traces.
    std::vector<TraceRow> best_trace;
};

/// Parallel-for hook: callable(count, body) must invoke body(i) exactly once
/// for every i in [0, count), in any order or interleaving. An empty
/// executor runs serially. The library never spawns threads of its own; the
/// caller owns all concurrency.
using Executor =
    std::function<void(std::size_t, const std::function<void(std::size_t)>&)>;

/// Level-1 starting points: restart s draws u_1 ~ U(-init_u_range,
/// +init_u_range) then v_1 ~ U(-init_v_range, +init_v_range) from the stream
/// derived for (graph_id, level 1, restart s). Bias fields start at 1 in
/// adaptive_bias mode and 0 in standard mode.
std::vector<VariationalPoint> seed_level1(const ProtocolConfig& cfg, std::uint32_t n,
                                          std::string_view graph_id);

/// Level-(p+1) starting points from the level-p winner: coefficient vectors
/// are perturbed elementwise (a -> a + alpha * a * N(0,1); draws ordered u
/// first, then v, then h) and extended with a trailing zero. Restart 0 is
/// the unperturbed extension.
std::vector<VariationalPoint> extend_points(const VariationalPoint& best,
                                            const ProtocolConfig& cfg,
                                            std::uint32_t next_level,
                                            std::string_view graph_id);

/// Runs all restarts of one level and summarizes the winner. A restart that
/// throws NumericalError is recorded as failed and skipped; only if every
/// restart fails does the level itself throw.
LevelRecord run_level(std::span<const VariationalPoint> points, const CostDiagonal& cost,
                      const ExactSolution& solution, const ProtocolConfig& cfg,
                      std::uint32_t level, const Executor& executor = {});

/// Full protocol on one graph: exact solve, level-1 seeding, then for each
/// level run the restarts and extend the winner to the next level.
std::vector<LevelRecord> run_sweep(const GraphInstance& g, const ProtocolConfig& cfg,
                                   const Executor& executor = {});

/// Index of the winning restart: lowest final energy, ties broken toward the
/// lowest index. NaN entries (failed restarts) never win; all-NaN input is a
/// NumericalError.
std::size_t best_restart_index(std::span<const double> final_energies);

}  // namespace abq
