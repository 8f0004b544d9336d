#include "abq/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "abq/errors.hpp"
#include "abq/numeric.hpp"
#include "abq/rng.hpp"
#include "abq/version.hpp"

namespace abq {

namespace {

std::string trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return std::string(text.substr(begin, end - begin));
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

double parse_double(const std::string& text, const std::string& where) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        throw ConfigError(where + ": expected a number, got '" + t + "'");
    return value;
}

std::uint64_t parse_u64(const std::string& text, const std::string& where) {
    const std::string t = trim(text);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        throw ConfigError(where + ": expected a nonnegative integer, got '" + t + "'");
    return value;
}

std::uint32_t parse_u32(const std::string& text, const std::string& where) {
    const std::uint64_t v = parse_u64(text, where);
    if (v > 0xffffffffULL) throw ConfigError(where + ": value out of range");
    return static_cast<std::uint32_t>(v);
}

bool parse_bool(const std::string& text, const std::string& where) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError(where + ": expected a boolean, got '" + t + "'");
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write file: " + path.string());
    return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

/// Reads all lines; requires the first to be "# schema=<expected>".
std::vector<std::string> read_schema_lines(const std::filesystem::path& path,
                                           std::string_view expected) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    if (lines.empty())
        throw ConfigError(path.string() + ": empty file, expected schema '" +
                          std::string(expected) + "'");
    const std::string want = "# schema=" + std::string(expected);
    if (lines.front() != want)
        throw ConfigError(path.string() + ": schema line '" + lines.front() +
                          "' does not match '" + want + "'");
    return lines;
}

constexpr std::string_view kResultsHeader =
    "graph_id,n,ensemble,mode,level,e_best,e_opt,e_max,r,f,n_ite_mean,seed";

}  // namespace

void write_results_csv(const std::filesystem::path& path, std::span<const ResultRow> rows) {
    std::ofstream out = open_for_write(path);
    out << "# schema=" << kResultsSchema << "\n" << kResultsHeader << "\n";
    for (const ResultRow& row : rows) {
        if (row.graph_id.find(',') != std::string::npos)
            throw ConfigError("graph id '" + row.graph_id + "' contains a comma");
        out << row.graph_id << ',' << row.n << ',' << row.ensemble << ','
            << to_string(row.mode) << ',' << row.level << ','
            << format_double(row.e_best) << ',' << format_double(row.e_opt) << ','
            << format_double(row.e_max) << ',' << format_double(row.r) << ','
            << format_double(row.f) << ',' << format_double(row.n_ite_mean) << ','
            << row.seed << "\n";
    }
    finish_write(out, path);
}

std::vector<ResultRow> read_results_csv(const std::filesystem::path& path) {
    const auto lines = read_schema_lines(path, kResultsSchema);
    if (lines.size() < 2 || lines[1] != kResultsHeader)
        throw ConfigError(path.string() + ": unexpected results header");
    std::vector<ResultRow> rows;
    for (std::size_t i = 2; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(i + 1);
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != 12)
            throw ConfigError(where + ": expected 12 fields, got " +
                              std::to_string(fields.size()));
        ResultRow row;
        row.graph_id = fields[0];
        row.n = parse_u32(fields[1], where);
        row.ensemble = fields[2];
        row.mode = mode_from_string(fields[3]);
        row.level = parse_u32(fields[4], where);
        row.e_best = parse_double(fields[5], where);
        row.e_opt = parse_double(fields[6], where);
        row.e_max = parse_double(fields[7], where);
        row.r = parse_double(fields[8], where);
        row.f = parse_double(fields[9], where);
        row.n_ite_mean = parse_double(fields[10], where);
        row.seed = parse_u64(fields[11], where);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_trace_csv(const std::filesystem::path& path, std::span<const TraceRow> trace,
                     std::uint32_t n) {
    std::ofstream out = open_for_write(path);
    out << "# schema=" << kTraceSchema << "\n";
    out << "iteration,energy,fidelity";
    for (std::uint32_t j = 0; j < n; ++j) out << ",h_" << j;
    out << "\n";
    for (const TraceRow& row : trace) {
        if (row.h.size() != n)
            throw ConfigError("trace row has " + std::to_string(row.h.size()) +
                              " bias entries for " + std::to_string(n) + " qubits");
        out << row.iteration << ',' << format_double(row.energy) << ',';
        if (!std::isnan(row.fidelity)) out << format_double(row.fidelity);
        for (double h : row.h) out << ',' << format_double(h);
        out << "\n";
    }
    finish_write(out, path);
}

void write_curves_csv(const std::filesystem::path& path,
                      std::span<const LabeledCurve> curves) {
    std::ofstream out = open_for_write(path);
    out << "# schema=" << kCurvesSchema << "\n";
    out << "ensemble,n,mode,p,mean_one_minus_r,std_one_minus_r,mean_one_minus_f,"
           "std_one_minus_f,ensemble_size\n";
    for (const LabeledCurve& labeled : curves) {
        for (const CurvePoint& pt : labeled.curve.points) {
            out << labeled.ensemble << ',' << labeled.curve.n << ','
                << to_string(labeled.curve.mode) << ',' << pt.p << ','
                << format_double(pt.mean_one_minus_r) << ','
                << format_double(pt.std_one_minus_r) << ','
                << format_double(pt.mean_one_minus_f) << ','
                << format_double(pt.std_one_minus_f) << ','
                << labeled.curve.ensemble_size << "\n";
        }
    }
    finish_write(out, path);
}

void write_fits_csv(const std::filesystem::path& path, std::span<const FitRow> rows) {
    std::ofstream out = open_for_write(path);
    out << "# schema=" << kFitsSchema << "\n";
    out << "ensemble,n,mode,metric,form,p0,c,residual\n";
    for (const FitRow& row : rows) {
        out << row.ensemble << ',' << row.n << ',' << to_string(row.mode) << ','
            << row.metric << ',' << to_string(row.fit.form) << ','
            << format_double(row.fit.p0) << ',' << format_double(row.fit.c) << ','
            << format_double(row.fit.residual) << "\n";
    }
    finish_write(out, path);
}

void write_pstar_csv(const std::filesystem::path& path, std::span<const PstarRow> rows) {
    std::ofstream out = open_for_write(path);
    out << "# schema=" << kPstarSchema << "\n";
    out << "ensemble,n,mode,p_star,method\n";
    for (const PstarRow& row : rows) {
        out << row.ensemble << ',' << row.n << ',' << to_string(row.mode) << ','
            << row.p_star << ',' << row.method << "\n";
    }
    finish_write(out, path);
}

void write_speedup_csv(const std::filesystem::path& path, std::span<const SpeedupRow> rows) {
    std::ofstream out = open_for_write(path);
    out << "# schema=" << kSpeedupSchema << "\n";
    out << "ensemble,n,p_star_standard,p_star_adaptive,speedup\n";
    for (const SpeedupRow& row : rows) {
        out << row.ensemble << ',' << row.n << ',' << row.p_star_standard << ','
            << row.p_star_adaptive << ',' << format_double(row.speedup) << "\n";
    }
    finish_write(out, path);
}

void write_landscape_csv(const std::filesystem::path& path, const LandscapeGrid& grid) {
    std::ofstream out = open_for_write(path);
    out << "# schema=" << kLandscapeSchema << "\n";
    out << "u,v,energy\n";
    for (std::size_t iu = 0; iu < grid.u_values.size(); ++iu)
        for (std::size_t iv = 0; iv < grid.v_values.size(); ++iv)
            out << format_double(grid.u_values[iu]) << ','
                << format_double(grid.v_values[iv]) << ','
                << format_double(grid.energy[iu][iv]) << "\n";
    finish_write(out, path);
}

std::vector<KeyValueEntry> read_key_value_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path.string());
    std::vector<KeyValueEntry> entries;
    std::string line;
    std::uint32_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected 'key = value', got '" + stripped + "'");
        KeyValueEntry entry;
        entry.line = line_no;
        entry.key = trim(stripped.substr(0, eq));
        entry.value = trim(stripped.substr(eq + 1));
        if (entry.key.empty())
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": empty key");
        entries.push_back(std::move(entry));
    }
    return entries;
}

void apply_config_entries(std::span<const KeyValueEntry> entries, ProtocolConfig& cfg,
                          const std::string& source_name) {
    std::set<std::string> seen;
    for (const KeyValueEntry& entry : entries) {
        const std::string where = source_name + ":" + std::to_string(entry.line);
        if (!seen.insert(entry.key).second)
            throw ConfigError(where + ": duplicate key '" + entry.key + "'");
        if (entry.key == "mode") {
            cfg.mode = mode_from_string(entry.value);
        } else if (entry.key == "target_p") {
            cfg.target_p = parse_u32(entry.value, where);
        } else if (entry.key == "restarts") {
            cfg.restarts = parse_u32(entry.value, where);
        } else if (entry.key == "alpha") {
            cfg.alpha = parse_double(entry.value, where);
        } else if (entry.key == "master_seed") {
            cfg.master_seed = parse_u64(entry.value, where);
        } else if (entry.key == "init_u_range") {
            cfg.init_u_range = parse_double(entry.value, where);
        } else if (entry.key == "init_v_range") {
            cfg.init_v_range = parse_double(entry.value, where);
        } else if (entry.key == "eps_g") {
            cfg.optimizer.eps_g = parse_double(entry.value, where);
        } else if (entry.key == "adam_rate") {
            cfg.optimizer.adam_rate = parse_double(entry.value, where);
        } else if (entry.key == "adam_beta1") {
            cfg.optimizer.adam_beta1 = parse_double(entry.value, where);
        } else if (entry.key == "adam_beta2") {
            cfg.optimizer.adam_beta2 = parse_double(entry.value, where);
        } else if (entry.key == "adam_eps") {
            cfg.optimizer.adam_eps = parse_double(entry.value, where);
        } else if (entry.key == "ell") {
            cfg.optimizer.ell = parse_double(entry.value, where);
        } else if (entry.key == "tol") {
            cfg.optimizer.tol = parse_double(entry.value, where);
        } else if (entry.key == "max_iter") {
            cfg.optimizer.max_iter = parse_u32(entry.value, where);
        } else if (entry.key == "h_max") {
            cfg.optimizer.h_max = parse_double(entry.value, where);
        } else if (entry.key == "central_diff") {
            cfg.optimizer.central_diff = parse_bool(entry.value, where);
        } else if (entry.key == "sample_shots") {
            cfg.optimizer.sample_shots = parse_u64(entry.value, where);
        } else if (entry.key == "sample_seed") {
            cfg.optimizer.sample_seed = parse_u64(entry.value, where);
        } else {
            throw ConfigError(where + ": unknown key '" + entry.key + "'");
        }
    }
}

ProtocolConfig load_protocol_config(const std::filesystem::path& path,
                                    ProtocolConfig base) {
    const auto entries = read_key_value_file(path);
    apply_config_entries(entries, base, path.string());
    return base;
}

void write_manifest(const std::filesystem::path& path, const ManifestInput& input) {
    std::ofstream out = open_for_write(path);
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));

    out << "# schema=" << kManifestSchema << "\n";
    out << "version = " << kVersion << "\n";
    out << "created_utc = " << stamp << "\n";
    out << "command = " << input.command << "\n";
    out << "jobs = " << input.jobs << "\n";
    out << "mode = " << to_string(input.config.mode) << "\n";
    out << "target_p = " << input.config.target_p << "\n";
    out << "restarts = " << input.config.restarts << "\n";
    out << "alpha = " << format_double(input.config.alpha) << "\n";
    out << "master_seed = " << input.config.master_seed << "\n";
    out << "init_u_range = " << format_double(input.config.init_u_range) << "\n";
    out << "init_v_range = " << format_double(input.config.init_v_range) << "\n";
    out << "eps_g = " << format_double(input.config.optimizer.eps_g) << "\n";
    out << "adam_rate = " << format_double(input.config.optimizer.adam_rate) << "\n";
    out << "adam_beta1 = " << format_double(input.config.optimizer.adam_beta1) << "\n";
    out << "adam_beta2 = " << format_double(input.config.optimizer.adam_beta2) << "\n";
    out << "adam_eps = " << format_double(input.config.optimizer.adam_eps) << "\n";
    out << "ell = " << format_double(input.config.optimizer.ell) << "\n";
    out << "tol = " << format_double(input.config.optimizer.tol) << "\n";
    out << "max_iter = " << input.config.optimizer.max_iter << "\n";
    out << "h_max = " << format_double(input.config.optimizer.h_max) << "\n";
    out << "central_diff = " << (input.config.optimizer.central_diff ? "true" : "false")
        << "\n";
    out << "sample_shots = " << input.config.optimizer.sample_shots << "\n";
    out << "sample_seed = " << input.config.optimizer.sample_seed << "\n";
    out << "results = " << input.results_file.string() << "\n";
    for (std::size_t i = 0; i < input.graph_files.size(); ++i) {
        const auto& file = input.graph_files[i];
        std::ifstream graph_in(file, std::ios::binary);
        if (!graph_in) throw IoError("cannot hash graph file: " + file.string());
        std::ostringstream content;
        content << graph_in.rdbuf();
        out << "graph." << i << " = " << file.string() << "\n";
        out << "graph_hash." << i << " = " << fnv1a64(content.str()) << "\n";
    }
    finish_write(out, path);
}

}  // namespace abq
