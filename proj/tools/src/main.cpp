#include <algorithm>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "abq/cost.hpp"
#include "abq/errors.hpp"
#include "abq/graph.hpp"
#include "abq/io.hpp"
#include "abq/metrics.hpp"
#include "abq/numeric.hpp"
#include "abq/protocol.hpp"
#include "abq/rng.hpp"
#include "abq/statevector.hpp"
#include "abq/version.hpp"

#include "parallel.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

/// Default output directory: $ABQ_OUT_DIR when set, else the working
/// directory.
fs::path default_out_dir() {
    if (const char* env = std::getenv("ABQ_OUT_DIR")) return fs::path(env);
    return fs::path(".");
}

/// Instance family tag: 'u' when every weight is exactly 1, 'w' otherwise,
/// followed by the regularity.
std::string ensemble_tag(const abq::GraphInstance& g) {
    bool unweighted = true;
    for (const abq::Edge& e : g.edges)
        if (e.weight != 1.0) {
            unweighted = false;
            break;
        }
    return std::string(unweighted ? "u" : "w") + std::to_string(g.regularity) + "r";
}

struct GenOptions {
    std::uint32_t n = 8;
    std::uint32_t regularity = 3;
    std::uint32_t count = 1;
    bool weighted = false;
    bool nonisomorphic = false;
    std::uint32_t budget = 20000;
    std::uint64_t seed = 1;
    std::string out_dir;
    std::string prefix;
};

int run_gen(const GenOptions& opt) {
    const fs::path dir = opt.out_dir.empty() ? default_out_dir() : fs::path(opt.out_dir);
    fs::create_directories(dir);

    std::vector<abq::GraphInstance> graphs;
    if (opt.nonisomorphic) {
        if (opt.weighted)
            throw abq::ConfigError("--nonisomorphic collects unweighted classes only");
        if (opt.regularity != 3)
            throw abq::ConfigError("--nonisomorphic is defined for regularity 3");
        abq::U3rCollection collection =
            abq::collect_nonisomorphic_u3r(opt.n, opt.budget, opt.seed);
        if (!collection.complete)
            std::cerr << "abq gen: class collection did not stabilize within "
                      << collection.attempts << " attempts; result may be incomplete\n";
        graphs = std::move(collection.graphs);
    } else {
        for (std::uint32_t i = 0; i < opt.count; ++i) {
            abq::GraphInstance g = abq::generate_regular_graph(
                opt.n, opt.regularity, opt.weighted,
                abq::derive_stream(opt.seed, "gen", opt.n, i));
            std::ostringstream id;
            id << (opt.weighted ? "w" : "u") << opt.regularity << "r-n" << opt.n << "-";
            id << std::setw(3) << std::setfill('0') << i;
            g.id = id.str();
            graphs.push_back(std::move(g));
        }
    }

    for (abq::GraphInstance& g : graphs) {
        if (!opt.prefix.empty()) g.id = opt.prefix + "-" + g.id;
        const fs::path file = dir / (g.id + ".graph");
        abq::save_graph(g, file);
        std::cout << file.string() << "\n";
    }
    return kExitOk;
}

struct SweepOptions {
    std::vector<std::string> inputs;
    std::string config_file;
    std::string mode;
    std::uint32_t target_p = 0;
    std::int64_t restarts = -1;
    double alpha = -1.0;
    double tol = -1.0;
    std::int64_t max_iter = -1;
    double adam_rate = -1.0;
    double ell = -1.0;
    double eps_g = -1.0;
    bool seed_set = false;
    std::uint64_t seed = 0;
    std::string out_file;
    std::string trace_dir;
    std::string dump_dir;
    unsigned jobs = 1;
};

std::vector<fs::path> expand_graph_inputs(const std::vector<std::string>& inputs) {
    std::vector<fs::path> files;
    for (const std::string& input : inputs) {
        const fs::path path(input);
        if (fs::is_directory(path)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::directory_iterator(path))
                if (entry.is_regular_file() && entry.path().extension() == ".graph")
                    found.push_back(entry.path());
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(path);
        }
    }
    if (files.empty()) throw abq::ConfigError("no graph files to sweep");
    return files;
}

int run_sweep_command(const SweepOptions& opt, const std::string& command_line) {
    abq::ProtocolConfig cfg;
    if (!opt.config_file.empty()) cfg = abq::load_protocol_config(opt.config_file, cfg);
    if (!opt.mode.empty()) cfg.mode = abq::mode_from_string(opt.mode);
    if (opt.target_p > 0) cfg.target_p = opt.target_p;
    if (opt.restarts >= 0) cfg.restarts = static_cast<std::uint32_t>(opt.restarts);
    if (opt.alpha >= 0.0) cfg.alpha = opt.alpha;
    if (opt.tol >= 0.0) cfg.optimizer.tol = opt.tol;
    if (opt.max_iter >= 0) cfg.optimizer.max_iter = static_cast<std::uint32_t>(opt.max_iter);
    if (opt.adam_rate >= 0.0) cfg.optimizer.adam_rate = opt.adam_rate;
    if (opt.ell >= 0.0) cfg.optimizer.ell = opt.ell;
    if (opt.eps_g >= 0.0) cfg.optimizer.eps_g = opt.eps_g;
    if (opt.seed_set) cfg.master_seed = opt.seed;
    cfg.record_traces = !opt.trace_dir.empty();

    const fs::path out_file = opt.out_file.empty()
                                  ? default_out_dir() / "results.csv"
                                  : fs::path(opt.out_file);
    if (out_file.has_parent_path()) fs::create_directories(out_file.parent_path());
    if (!opt.trace_dir.empty()) fs::create_directories(opt.trace_dir);
    if (!opt.dump_dir.empty()) fs::create_directories(opt.dump_dir);

    const std::vector<fs::path> files = expand_graph_inputs(opt.inputs);
    std::vector<abq::GraphInstance> graphs;
    graphs.reserve(files.size());
    for (const fs::path& file : files) graphs.push_back(abq::load_graph(file));

    // One graph: parallelize over restarts. Several graphs: parallelize over
    // graphs. Either way each task owns its seed-derived stream, so the
    // results are identical to a serial run.
    const abq::Executor restart_executor =
        graphs.size() == 1 ? abq::cli::make_thread_executor(opt.jobs) : abq::Executor{};
    std::vector<std::vector<abq::LevelRecord>> all_records(graphs.size());
    std::vector<std::exception_ptr> graph_errors(graphs.size());
    auto sweep_one = [&](std::size_t i) {
        try {
            all_records[i] = abq::run_sweep(graphs[i], cfg, restart_executor);
        } catch (...) {
            graph_errors[i] = std::current_exception();
        }
    };
    if (graphs.size() > 1 && opt.jobs > 1) {
        abq::cli::make_thread_executor(opt.jobs)(graphs.size(), sweep_one);
    } else {
        for (std::size_t i = 0; i < graphs.size(); ++i) sweep_one(i);
    }
    for (const std::exception_ptr& err : graph_errors)
        if (err) std::rethrow_exception(err);

    std::vector<abq::ResultRow> rows;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        const abq::GraphInstance& g = graphs[i];
        for (const abq::LevelRecord& rec : all_records[i]) {
            abq::ResultRow row;
            row.graph_id = g.id;
            row.n = g.n;
            row.ensemble = ensemble_tag(g);
            row.mode = cfg.mode;
            row.level = rec.level;
            row.e_best = rec.e_best;
            row.e_opt = rec.e_opt;
            row.e_max = rec.e_max;
            row.r = rec.r;
            row.f = rec.f;
            row.n_ite_mean = rec.n_ite_mean;
            row.seed = cfg.master_seed;
            rows.push_back(std::move(row));

            if (!opt.trace_dir.empty()) {
                const fs::path trace_file =
                    fs::path(opt.trace_dir) /
                    (g.id + "-p" + std::to_string(rec.level) + ".trace.csv");
                abq::write_trace_csv(trace_file, rec.best_trace, g.n);
            }
            if (!opt.dump_dir.empty()) {
                const abq::CostDiagonal cost = abq::build_cost_diagonal(g);
                const abq::StateVector sv = abq::evolve(
                    cost, abq::to_schedule(rec.best_point.fourier), rec.best_point.bias);
                const fs::path dump_file =
                    fs::path(opt.dump_dir) /
                    (g.id + "-p" + std::to_string(rec.level) + ".svec");
                abq::write_statevector(sv, dump_file);
            }
        }
    }
    std::sort(rows.begin(), rows.end(),
              [](const abq::ResultRow& a, const abq::ResultRow& b) {
                  return std::tie(a.graph_id, a.level) < std::tie(b.graph_id, b.level);
              });
    abq::write_results_csv(out_file, rows);

    abq::ManifestInput manifest;
    manifest.command = command_line;
    manifest.config = cfg;
    manifest.graph_files = files;
    manifest.results_file = out_file;
    manifest.jobs = opt.jobs;
    abq::write_manifest(out_file.string() + ".manifest", manifest);

    std::cout << out_file.string() << "\n";
    return kExitOk;
}

/// exp_sqrt decays match the adaptive algorithm everywhere and the weighted
/// standard accuracy curve; everything else standard is exp_linear.
abq::FitForm pick_fit_form(abq::Mode mode, const std::string& ensemble,
                           const std::string& metric) {
    if (mode == abq::Mode::adaptive_bias) return abq::FitForm::exp_sqrt;
    const bool weighted = !ensemble.empty() && ensemble.front() == 'w';
    if (weighted && metric == "accuracy") return abq::FitForm::exp_sqrt;
    return abq::FitForm::exp_linear;
}

struct ReportOptions {
    std::vector<std::string> results_files;
    std::string out_dir;
    double r_star = 0.99;
};

int run_report(const ReportOptions& opt) {
    const fs::path dir = opt.out_dir.empty() ? default_out_dir() : fs::path(opt.out_dir);
    fs::create_directories(dir);

    std::vector<abq::ResultRow> rows;
    for (const std::string& file : opt.results_files) {
        const auto part = abq::read_results_csv(file);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    if (rows.empty()) throw abq::ConfigError("no result rows to report on");

    using GroupKey = std::tuple<std::string, std::uint32_t, abq::Mode>;
    std::map<GroupKey, std::vector<abq::GraphLevelOutcome>> groups;
    for (const abq::ResultRow& row : rows) {
        abq::GraphLevelOutcome outcome;
        outcome.graph_id = row.graph_id;
        outcome.level = row.level;
        outcome.r = row.r;
        outcome.f = row.f;
        groups[{row.ensemble, row.n, row.mode}].push_back(std::move(outcome));
    }

    std::vector<abq::LabeledCurve> curves;
    std::vector<abq::FitRow> fits;
    std::vector<abq::PstarRow> pstars;
    for (const auto& [key, outcomes] : groups) {
        const auto& [ensemble, n, mode] = key;
        abq::LabeledCurve labeled;
        labeled.ensemble = ensemble;
        labeled.curve = abq::aggregate_ensemble(outcomes, n, mode);
        const abq::EnsembleCurve& curve = labeled.curve;
        curves.push_back(labeled);

        std::optional<abq::FitResult> accuracy_fit;
        for (const std::string metric : {"accuracy", "infidelity"}) {
            std::vector<std::pair<double, double>> points;
            for (const abq::CurvePoint& pt : curve.points) {
                const double y =
                    metric == "accuracy" ? pt.mean_one_minus_r : pt.mean_one_minus_f;
                if (y > 0.0 && y < 1.0)
                    points.emplace_back(static_cast<double>(pt.p), y);
            }
            if (points.size() < 3) {
                std::cerr << "abq report: skipping " << metric << " fit for " << ensemble
                          << " n=" << n << " " << abq::to_string(mode)
                          << " (fewer than 3 usable points)\n";
                continue;
            }
            const abq::FitForm form = pick_fit_form(mode, ensemble, metric);
            try {
                abq::FitRow fit_row;
                fit_row.ensemble = ensemble;
                fit_row.n = n;
                fit_row.mode = mode;
                fit_row.metric = metric;
                fit_row.fit = abq::fit_curve(points, form);
                if (metric == "accuracy") accuracy_fit = fit_row.fit;
                fits.push_back(std::move(fit_row));
            } catch (const abq::NumericalError& e) {
                std::cerr << "abq report: " << metric << " fit failed for " << ensemble
                          << " n=" << n << " " << abq::to_string(mode) << ": " << e.what()
                          << "\n";
            }
        }

        // Crossing depths: the standard curves converge too slowly to tabulate
        // the crossing directly, so it comes from the accuracy fit; the
        // adaptive curves cross within reach, so the data speaks for itself.
        try {
            abq::PstarRow ps;
            ps.ensemble = ensemble;
            ps.n = n;
            ps.mode = mode;
            if (mode == abq::Mode::standard) {
                if (!accuracy_fit.has_value())
                    throw abq::UnreachableError("no accuracy fit available");
                ps.p_star = abq::p_star(*accuracy_fit, opt.r_star);
                ps.method = "fit";
            } else {
                ps.p_star = abq::p_star(curve, opt.r_star);
                ps.method = "data";
            }
            pstars.push_back(std::move(ps));
        } catch (const abq::Error& e) {
            std::cerr << "abq report: no crossing depth for " << ensemble << " n=" << n
                      << " " << abq::to_string(mode) << ": " << e.what() << "\n";
        }
    }

    std::vector<abq::SpeedupRow> speedups;
    for (const abq::PstarRow& std_row : pstars) {
        if (std_row.mode != abq::Mode::standard) continue;
        for (const abq::PstarRow& ab_row : pstars) {
            if (ab_row.mode != abq::Mode::adaptive_bias) continue;
            if (ab_row.n != std_row.n) continue;
            // Weighted/unweighted families pair up across modes by the
            // weighting letter; n must match exactly.
            if (ab_row.ensemble.front() != std_row.ensemble.front()) continue;
            abq::SpeedupRow s;
            s.ensemble = std_row.ensemble;
            s.n = std_row.n;
            s.p_star_standard = std_row.p_star;
            s.p_star_adaptive = ab_row.p_star;
            s.speedup = abq::speedup(std_row.p_star, ab_row.p_star);
            speedups.push_back(std::move(s));
        }
    }

    abq::write_curves_csv(dir / "curves.csv", curves);
    abq::write_fits_csv(dir / "fits.csv", fits);
    abq::write_pstar_csv(dir / "pstar.csv", pstars);
    abq::write_speedup_csv(dir / "speedup.csv", speedups);
    std::cout << (dir / "curves.csv").string() << "\n"
              << (dir / "fits.csv").string() << "\n"
              << (dir / "pstar.csv").string() << "\n"
              << (dir / "speedup.csv").string() << "\n";
    return kExitOk;
}

struct LandscapeOptions {
    std::string graph_file;
    std::string out_file;
    std::uint32_t resolution = 41;
    double u_min = -abq::kInitURange;
    double u_max = abq::kInitURange;
    double v_min = -abq::kInitVRange;
    double v_max = abq::kInitVRange;
    std::string bias = "zeros";
};

int run_landscape(const LandscapeOptions& opt) {
    const abq::GraphInstance g = abq::load_graph(opt.graph_file);
    const abq::CostDiagonal cost = abq::build_cost_diagonal(g);

    abq::VariationalPoint base;
    base.fourier.u = {0.0};
    base.fourier.v = {0.0};
    if (opt.bias == "zeros") {
        base.bias.h.assign(g.n, 0.0);
    } else if (opt.bias == "ones") {
        base.bias.h.assign(g.n, 1.0);
    } else {
        throw abq::ConfigError("unknown --bias value '" + opt.bias +
                               "' (expected 'zeros' or 'ones')");
    }

    const abq::LandscapeGrid grid = abq::scan_landscape(
        cost, base, opt.u_min, opt.u_max, opt.v_min, opt.v_max, opt.resolution);
    const fs::path out_file = opt.out_file.empty() ? default_out_dir() / "landscape.csv"
                                                   : fs::path(opt.out_file);
    if (out_file.has_parent_path()) fs::create_directories(out_file.parent_path());
    abq::write_landscape_csv(out_file, grid);
    std::cout << out_file.string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MaxCut benchmark harness: standard and adaptive-bias variational "
                 "optimization on regular graphs"};
    app.set_version_flag("--version", std::string("abq ") + abq::kVersion);
    app.require_subcommand(1);

    GenOptions gen;
    CLI::App* gen_cmd = app.add_subcommand("gen", "Generate regular graph instances");
    gen_cmd->add_option("--n", gen.n, "Vertex count")->required();
    gen_cmd->add_option("--regularity", gen.regularity, "Vertex degree (default 3)");
    gen_cmd->add_option("--count", gen.count, "Number of instances");
    gen_cmd->add_flag("--weighted", gen.weighted, "Draw edge weights from (0, 1]");
    gen_cmd->add_flag("--nonisomorphic", gen.nonisomorphic,
                      "Collect all distinct unweighted classes instead");
    gen_cmd->add_option("--budget", gen.budget,
                        "Generation attempts for --nonisomorphic");
    gen_cmd->add_option("--seed", gen.seed, "Master seed");
    gen_cmd->add_option("--out", gen.out_dir, "Output directory");
    gen_cmd->add_option("--prefix", gen.prefix, "Filename prefix");

    SweepOptions sweep;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Run the full protocol on graph instances");
    sweep_cmd->add_option("graphs", sweep.inputs, "Graph files or directories")
        ->required();
    sweep_cmd->add_option("--config", sweep.config_file, "key = value config file");
    sweep_cmd->add_option("--mode", sweep.mode, "standard | adaptive");
    sweep_cmd->add_option("--target-p", sweep.target_p, "Deepest level to run");
    sweep_cmd->add_option("--restarts", sweep.restarts, "Restarts per level");
    sweep_cmd->add_option("--alpha", sweep.alpha, "Extension perturbation scale");
    sweep_cmd->add_option("--tol", sweep.tol, "Convergence threshold");
    sweep_cmd->add_option("--max-iter", sweep.max_iter, "Iteration cap per restart");
    sweep_cmd->add_option("--adam-rate", sweep.adam_rate, "Adam learning rate");
    sweep_cmd->add_option("--ell", sweep.ell, "Bias feedback rate");
    sweep_cmd->add_option("--eps-g", sweep.eps_g, "Finite-difference step");
    sweep_cmd->add_option("--seed", sweep.seed, "Master seed")
        ->each([&sweep](const std::string&) { sweep.seed_set = true; });
    sweep_cmd->add_option("--out", sweep.out_file, "Results CSV path");
    sweep_cmd->add_option("--traces", sweep.trace_dir,
                          "Directory for per-level winner traces");
    sweep_cmd->add_option("--dump-states", sweep.dump_dir,
                          "Directory for per-level final statevectors");
    sweep_cmd->add_option("--jobs", sweep.jobs, "Worker threads");

    ReportOptions report;
    CLI::App* report_cmd =
        app.add_subcommand("report", "Aggregate results into curves, fits, and depths");
    report_cmd->add_option("results", report.results_files, "Results CSV files")
        ->required();
    report_cmd->add_option("--out-dir", report.out_dir, "Output directory");
    report_cmd->add_option("--r-star", report.r_star, "Target accuracy (default 0.99)");

    LandscapeOptions landscape;
    CLI::App* landscape_cmd =
        app.add_subcommand("landscape", "Scan the level-1 energy surface");
    landscape_cmd->add_option("--graph", landscape.graph_file, "Graph file")->required();
    landscape_cmd->add_option("--out", landscape.out_file, "Output CSV path");
    landscape_cmd->add_option("--resolution", landscape.resolution,
                              "Grid points per axis");
    landscape_cmd->add_option("--u-min", landscape.u_min, "Lower u bound");
    landscape_cmd->add_option("--u-max", landscape.u_max, "Upper u bound");
    landscape_cmd->add_option("--v-min", landscape.v_min, "Lower v bound");
    landscape_cmd->add_option("--v-max", landscape.v_max, "Upper v bound");
    landscape_cmd->add_option("--bias", landscape.bias, "Bias fields: zeros | ones");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    std::ostringstream command_line;
    for (int i = 0; i < argc; ++i) command_line << (i ? " " : "") << argv[i];

    try {
        if (gen_cmd->parsed()) return run_gen(gen);
        if (sweep_cmd->parsed()) return run_sweep_command(sweep, command_line.str());
        if (report_cmd->parsed()) return run_report(report);
        if (landscape_cmd->parsed()) return run_landscape(landscape);
        throw abq::ConfigError("no subcommand given");
    } catch (const abq::ConfigError& e) {
        std::cerr << "abq: " << e.what() << "\n";
        return kExitConfig;
    } catch (const abq::CapacityError& e) {
        std::cerr << "abq: " << e.what() << "\n";
        return kExitConfig;
    } catch (const abq::IoError& e) {
        std::cerr << "abq: " << e.what() << "\n";
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "abq: " << e.what() << "\n";
        return kExitIo;
    } catch (const abq::Error& e) {
        // GenerationError, NumericalError, UnreachableError.
        std::cerr << "abq: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "abq: " << e.what() << "\n";
        return kExitNumerical;
    }
}
