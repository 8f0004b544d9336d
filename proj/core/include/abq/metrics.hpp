#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "abq/cost.hpp"
#include "abq/optimizer.hpp"
#include "abq/protocol.hpp"

namespace abq {

/// Approximation accuracy r = e_opt / e_max.
double accuracy(double e_opt, double e_max);

/// Decay models for 1-r and 1-F as functions of the level p:
///   exp_linear: y = exp(c - p / p0)
///   exp_sqrt:   y = exp(c - sqrt(p / p0))
enum class FitForm { exp_linear, exp_sqrt };

std::string_view to_string(FitForm form);
FitForm fit_form_from_string(std::string_view text);

struct FitResult {
    FitForm form = FitForm::exp_linear;
    /// Decay scale; positive.
    double p0 = 0.0;
    /// Intercept of the ln-space line.
    double c = 0.0;
    /// RMS residual of the ln-space fit.
    double residual = 0.0;
};

/// Least squares in ln space: ln y regressed on p (exp_linear) or sqrt(p)
/// (exp_sqrt). Requires at least 3 points with y in (0, 1) (ConfigError
/// otherwise) and a negative fitted slope (NumericalError otherwise).
FitResult fit_curve(std::span<const std::pair<double, double>> points, FitForm form);

struct CurvePoint {
    std::uint32_t p = 0;
    double mean_one_minus_r = 0.0;
    double std_one_minus_r = 0.0;
    double mean_one_minus_f = 0.0;
    double std_one_minus_f = 0.0;
};

/// Per-level ensemble statistics over one set of graphs, one mode.
struct EnsembleCurve {
    std::uint32_t n = 0;
    Mode mode = Mode::standard;
    /// Strictly increasing in p.
    std::vector<CurvePoint> points;
    std::uint32_t ensemble_size = 0;
};

/// Level at which the fitted accuracy curve crosses r_star: the model gives
/// p = p0 (c - ln(1 - r_star)) for exp_linear and p = p0 (c - ln(1 -
/// r_star))^2 for exp_sqrt, rounded to the nearest integer, at least 1.
/// Throws UnreachableError when the fit never reaches r_star at positive p,
/// ConfigError unless 0 < r_star < 1.
int p_star(const FitResult& fit, double r_star);

/// Smallest tabulated level whose mean accuracy reaches r_star;
/// UnreachableError if none does.
int p_star(const EnsembleCurve& curve, double r_star);

/// Quadratic depth-advantage ratio (p_standard / p_adaptive)^2.
double speedup(int p_star_standard, int p_star_adaptive);

/// Gates in one state preparation at level p on an n-vertex graph of the
/// given regularity: n initial one-qubit rotations plus, per level, 3 gates
/// per edge (two entangling, one rotation) and one mixer rotation per qubit:
/// p (3 n R / 2 + n) + n. Requires n R even.
std::uint64_t state_prep_gate_count(std::uint64_t n, std::uint64_t regularity,
                                    std::uint64_t p);

/// Total gates of a full level-p optimization with n_ite iterations and
/// m_zz shots per measured edge: n_ite (2p + 1) m_zz (n R / 2) gates per
/// preparation-and-measurement cycle times the preparation cost.
std::uint64_t total_gate_count(std::uint64_t n, std::uint64_t regularity, std::uint64_t p,
                               std::uint64_t n_ite, std::uint64_t m_zz);

/// Level-1 energy surface over (u_1, v_1) with the bias fields held fixed.
struct LandscapeGrid {
    std::vector<double> u_values;
    std::vector<double> v_values;
    /// energy[iu][iv].
    std::vector<std::vector<double>> energy;
};

/// Evaluates the level-1 energy on a resolution x resolution grid spanning
/// [u_min, u_max] x [v_min, v_max]. base must be a level-1 point; its bias
/// fields are used unchanged. resolution 0 evaluates only the base point
/// itself (a 1 x 1 grid).
LandscapeGrid scan_landscape(const CostDiagonal& cost, const VariationalPoint& base,
                             double u_min, double u_max, double v_min, double v_max,
                             std::uint32_t resolution);

/// One graph's outcome at one level, as fed to the ensemble aggregator.
struct GraphLevelOutcome {
    std::string graph_id;
    std::uint32_t level = 0;
    double r = 0.0;
    double f = 0.0;
};

/// Population mean and standard deviation of 1-r and 1-F per level. Every
/// graph must report exactly the same set of levels (ConfigError otherwise).
EnsembleCurve aggregate_ensemble(std::span<const GraphLevelOutcome> outcomes,
                                 std::uint32_t n, Mode mode);

}  // namespace abq
