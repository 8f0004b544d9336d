#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "abq/metrics.hpp"
#include "abq/optimizer.hpp"
#include "abq/protocol.hpp"

namespace abq {

/// Every CSV starts with "# schema=<tag>"; readers refuse unknown or mixed
/// tags so schema evolution can never silently misparse old files.
inline constexpr std::string_view kResultsSchema = "abq-results-1";
inline constexpr std::string_view kTraceSchema = "abq-trace-1";
inline constexpr std::string_view kCurvesSchema = "abq-curves-1";
inline constexpr std::string_view kFitsSchema = "abq-fits-1";
inline constexpr std::string_view kPstarSchema = "abq-pstar-1";
inline constexpr std::string_view kSpeedupSchema = "abq-speedup-1";
inline constexpr std::string_view kLandscapeSchema = "abq-landscape-1";
inline constexpr std::string_view kManifestSchema = "abq-manifest-1";

/// One (graph, level) outcome as stored in a results CSV.
struct ResultRow {
    std::string graph_id;
    std::uint32_t n = 0;
    /// Instance family tag, e.g. "u3r" / "w3r" (unweighted/weighted,
    /// regularity 3).
    std::string ensemble;
    Mode mode = Mode::standard;
    std::uint32_t level = 0;
    double e_best = 0.0;
    double e_opt = 0.0;
    double e_max = 0.0;
    double r = 0.0;
    double f = 0.0;
    double n_ite_mean = 0.0;
    std::uint64_t seed = 0;
};

void write_results_csv(const std::filesystem::path& path, std::span<const ResultRow> rows);
std::vector<ResultRow> read_results_csv(const std::filesystem::path& path);

/// Iteration trace of one optimization run; one h column per qubit. The
/// fidelity field is left empty when it was not tracked.
void write_trace_csv(const std::filesystem::path& path, std::span<const TraceRow> trace,
                     std::uint32_t n);

struct LabeledCurve {
    std::string ensemble;
    EnsembleCurve curve;
};
void write_curves_csv(const std::filesystem::path& path, std::span<const LabeledCurve> curves);

struct FitRow {
    std::string ensemble;
    std::uint32_t n = 0;
    Mode mode = Mode::standard;
    /// "accuracy" (1-r) or "infidelity" (1-F).
    std::string metric;
    FitResult fit;
};
void write_fits_csv(const std::filesystem::path& path, std::span<const FitRow> rows);

struct PstarRow {
    std::string ensemble;
    std::uint32_t n = 0;
    Mode mode = Mode::standard;
    int p_star = 0;
    /// "fit" (from the accuracy fit) or "data" (first tabulated crossing).
    std::string method;
};
void write_pstar_csv(const std::filesystem::path& path, std::span<const PstarRow> rows);

struct SpeedupRow {
    std::string ensemble;
    std::uint32_t n = 0;
    int p_star_standard = 0;
    int p_star_adaptive = 0;
    double speedup = 0.0;
};
void write_speedup_csv(const std::filesystem::path& path, std::span<const SpeedupRow> rows);

void write_landscape_csv(const std::filesystem::path& path, const LandscapeGrid& grid);

/// One entry of a flat "key = value" configuration file.
struct KeyValueEntry {
    std::uint32_t line = 0;
    std::string key;
    std::string value;
};

/// Parses a flat key=value file: blank lines and full-line # comments are
/// skipped; anything else must contain '='. Errors cite "path:line".
std::vector<KeyValueEntry> read_key_value_file(const std::filesystem::path& path);

/// Applies recognized keys onto cfg. Unknown keys, duplicate keys, and
/// malformed values raise ConfigError citing the offending line.
void apply_config_entries(std::span<const KeyValueEntry> entries, ProtocolConfig& cfg,
                          const std::string& source_name);

ProtocolConfig load_protocol_config(const std::filesystem::path& path,
                                    ProtocolConfig base = {});

/// Everything needed to replay a sweep bit-for-bit: full configuration,
/// seed, input graph files with content hashes, and the output location.
struct ManifestInput {
    std::string command;
    ProtocolConfig config;
    std::vector<std::filesystem::path> graph_files;
    std::filesystem::path results_file;
    unsigned jobs = 1;
};
void write_manifest(const std::filesystem::path& path, const ManifestInput& input);

}  // namespace abq
