#include "abq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "abq/errors.hpp"
#include "abq/numeric.hpp"

namespace abq {

double accuracy(double e_opt, double e_max) {
    if (!(e_max > 0.0)) throw ConfigError("e_max must be positive");
    return e_opt / e_max;
}

std::string_view to_string(FitForm form) {
    return form == FitForm::exp_linear ? "exp-linear" : "exp-sqrt";
}

FitForm fit_form_from_string(std::string_view text) {
    if (text == "exp-linear" || text == "exp_linear") return FitForm::exp_linear;
    if (text == "exp-sqrt" || text == "exp_sqrt") return FitForm::exp_sqrt;
    throw ConfigError("unknown fit form '" + std::string(text) + "'");
}

FitResult fit_curve(std::span<const std::pair<double, double>> points, FitForm form) {
    if (points.size() < 3)
        throw ConfigError("fit needs at least 3 points, got " +
                          std::to_string(points.size()));

    const std::size_t count = points.size();
    std::vector<double> xs(count);
    std::vector<double> ys(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto [p, y] = points[i];
        if (!(p > 0.0)) throw ConfigError("fit abscissa must be positive");
        if (!(y > 0.0) || !(y < 1.0))
            throw ConfigError("fit ordinate " + format_double(y) +
                              " outside the model domain (0, 1)");
        xs[i] = form == FitForm::exp_sqrt ? std::sqrt(p) : p;
        ys[i] = std::log(y);
    }

    const double nd = static_cast<double>(count);
    const double mean_x = pairwise_sum(0, count, [&](std::size_t i) { return xs[i]; }) / nd;
    const double mean_y = pairwise_sum(0, count, [&](std::size_t i) { return ys[i]; }) / nd;
    const double sxx = pairwise_sum(0, count, [&](std::size_t i) {
        return (xs[i] - mean_x) * (xs[i] - mean_x);
    });
    const double sxy = pairwise_sum(0, count, [&](std::size_t i) {
        return (xs[i] - mean_x) * (ys[i] - mean_y);
    });
    if (!(sxx > 0.0)) throw ConfigError("fit abscissas are all identical");

    const double slope = sxy / sxx;
    const double intercept = mean_y - slope * mean_x;
    if (!(slope < 0.0))
        throw NumericalError("fitted curve does not decay (ln-space slope " +
                             format_double(slope) + ")");

    FitResult fit;
    fit.form = form;
    // ln y = c - x / s maps to slope = -1/s with s = p0 (exp_linear) or
    // s = sqrt(p0) (exp_sqrt).
    const double scale = -1.0 / slope;
    fit.p0 = form == FitForm::exp_sqrt ? scale * scale : scale;
    fit.c = intercept;
    fit.residual = std::sqrt(pairwise_sum(0, count, [&](std::size_t i) {
                                 const double r = ys[i] - (intercept + slope * xs[i]);
                                 return r * r;
                             }) /
                             nd);
    return fit;
}

int p_star(const FitResult& fit, double r_star) {
    if (!(r_star > 0.0) || !(r_star < 1.0))
        throw ConfigError("r_star must lie in (0, 1)");
    if (!(fit.p0 > 0.0)) throw ConfigError("fit has nonpositive p0");
    // The model reaches r_star where c - x/s = ln(1 - r_star); solve for the
    // level and undo the abscissa transform.
    const double x_cross = fit.c - std::log(1.0 - r_star);
    if (!(x_cross > 0.0))
        throw UnreachableError("fitted curve never reaches r_star = " +
                               format_double(r_star) + " at positive depth");
    const double level = fit.form == FitForm::exp_sqrt ? fit.p0 * x_cross * x_cross
                                                       : fit.p0 * x_cross;
    return std::max(1, static_cast<int>(std::lround(level)));
}

int p_star(const EnsembleCurve& curve, double r_star) {
    if (!(r_star > 0.0) || !(r_star < 1.0))
        throw ConfigError("r_star must lie in (0, 1)");
    for (const CurvePoint& pt : curve.points)
        if (1.0 - pt.mean_one_minus_r >= r_star) return static_cast<int>(pt.p);
    throw UnreachableError("no tabulated level reaches r_star = " +
                           format_double(r_star));
}

double speedup(int p_star_standard, int p_star_adaptive) {
    if (p_star_standard < 1 || p_star_adaptive < 1)
        throw ConfigError("speedup needs positive depths");
    const double ratio =
        static_cast<double>(p_star_standard) / static_cast<double>(p_star_adaptive);
    return ratio * ratio;
}

std::uint64_t state_prep_gate_count(std::uint64_t n, std::uint64_t regularity,
                                    std::uint64_t p) {
    if (n == 0 || regularity == 0 || p == 0)
        throw ConfigError("gate counts need positive n, regularity, and p");
    if ((n * regularity) % 2 != 0)
        throw ConfigError("n * regularity must be even (handshake parity)");
    const std::uint64_t edges = n * regularity / 2;
    return p * (3 * edges + n) + n;
}

std::uint64_t total_gate_count(std::uint64_t n, std::uint64_t regularity, std::uint64_t p,
                               std::uint64_t n_ite, std::uint64_t m_zz) {
    if (n_ite == 0 || m_zz == 0)
        throw ConfigError("gate counts need positive n_ite and m_zz");
    const std::uint64_t edges = n * regularity / 2;
    const std::uint64_t cycles = n_ite * (2 * p + 1) * m_zz * edges;
    return cycles * state_prep_gate_count(n, regularity, p);
}

LandscapeGrid scan_landscape(const CostDiagonal& cost, const VariationalPoint& base,
                             double u_min, double u_max, double v_min, double v_max,
                             std::uint32_t resolution) {
    if (base.fourier.u.size() != 1 || base.fourier.v.size() != 1)
        throw ConfigError("landscape scan is defined on level-1 points");
    if (base.bias.h.size() != cost.n)
        throw ConfigError("landscape bias length does not match the qubit count");

    LandscapeGrid grid;
    if (resolution == 0) {
        grid.u_values = {base.fourier.u[0]};
        grid.v_values = {base.fourier.v[0]};
        grid.energy = {{energy_of_point(base, cost)}};
        return grid;
    }
    if (!(u_max >= u_min) || !(v_max >= v_min))
        throw ConfigError("landscape bounds are inverted");

    auto linspace = [](double lo, double hi, std::uint32_t count) {
        std::vector<double> xs(count);
        if (count == 1) {
            xs[0] = 0.5 * (lo + hi);
        } else {
            const double step = (hi - lo) / static_cast<double>(count - 1);
            for (std::uint32_t i = 0; i < count; ++i)
                xs[i] = lo + step * static_cast<double>(i);
        }
        return xs;
    };
    grid.u_values = linspace(u_min, u_max, resolution);
    grid.v_values = linspace(v_min, v_max, resolution);
    grid.energy.assign(resolution, std::vector<double>(resolution, 0.0));
    VariationalPoint pt = base;
    for (std::uint32_t iu = 0; iu < resolution; ++iu) {
        pt.fourier.u[0] = grid.u_values[iu];
        for (std::uint32_t iv = 0; iv < resolution; ++iv) {
            pt.fourier.v[0] = grid.v_values[iv];
            grid.energy[iu][iv] = energy_of_point(pt, cost);
        }
    }
    return grid;
}

EnsembleCurve aggregate_ensemble(std::span<const GraphLevelOutcome> outcomes,
                                 std::uint32_t n, Mode mode) {
    if (outcomes.empty()) throw ConfigError("cannot aggregate zero outcomes");

    std::map<std::string, std::map<std::uint32_t, const GraphLevelOutcome*>> by_graph;
    for (const GraphLevelOutcome& o : outcomes) {
        auto [it, fresh] = by_graph[o.graph_id].emplace(o.level, &o);
        if (!fresh)
            throw ConfigError("duplicate outcome for graph '" + o.graph_id +
                              "' at level " + std::to_string(o.level));
    }

    std::vector<std::uint32_t> levels;
    for (const auto& [level, ptr] : by_graph.begin()->second) levels.push_back(level);
    for (const auto& [graph_id, per_level] : by_graph) {
        if (per_level.size() != levels.size())
            throw ConfigError("graph '" + graph_id + "' reports a different level grid");
        std::size_t i = 0;
        for (const auto& [level, ptr] : per_level)
            if (level != levels[i++])
                throw ConfigError("graph '" + graph_id +
                                  "' reports a different level grid");
    }

    EnsembleCurve curve;
    curve.n = n;
    curve.mode = mode;
    curve.ensemble_size = static_cast<std::uint32_t>(by_graph.size());
    const double count = static_cast<double>(by_graph.size());
    for (std::uint32_t level : levels) {
        CurvePoint pt;
        pt.p = level;
        double sum_r = 0.0, sum_f = 0.0;
        for (const auto& [graph_id, per_level] : by_graph) {
            sum_r += 1.0 - per_level.at(level)->r;
            sum_f += 1.0 - per_level.at(level)->f;
        }
        pt.mean_one_minus_r = sum_r / count;
        pt.mean_one_minus_f = sum_f / count;
        double var_r = 0.0, var_f = 0.0;
        for (const auto& [graph_id, per_level] : by_graph) {
            const double dr = (1.0 - per_level.at(level)->r) - pt.mean_one_minus_r;
            const double df = (1.0 - per_level.at(level)->f) - pt.mean_one_minus_f;
            var_r += dr * dr;
            var_f += df * df;
        }
        pt.std_one_minus_r = std::sqrt(var_r / count);
        pt.std_one_minus_f = std::sqrt(var_f / count);
        curve.points.push_back(pt);
    }
    return curve;
}

}  // namespace abq
