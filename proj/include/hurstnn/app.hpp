#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hurstnn/dfa.hpp"
#include "hurstnn/nn_forecast.hpp"
#include "hurstnn/rolling.hpp"
#include "hurstnn/series.hpp"
#include "hurstnn/synth.hpp"

namespace hurstnn::app {

// Process exit codes.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitInputError = 2;

// Thrown for malformed or inconsistent configuration files.
class ConfigError : public Error {
public:
    using Error::Error;
};

// --- CSV ingestion -------------------------------------------------------

// Reads a `date,close` price file. Errors carry the 1-based file line.
PriceSeries ingest_csv(const std::filesystem::path& path, std::string index_id = {});
PriceSeries parse_price_csv(std::string_view text, std::string index_id);

std::string format_price_csv(const PriceSeries& prices);
void write_price_csv(const std::filesystem::path& path, const PriceSeries& prices);

// --- Run configuration ---------------------------------------------------

struct InputSpec {
    std::filesystem::path path;
    std::string index_id;
    std::string region;
};

enum class EnsembleKind { random_walk, fgn, surrogate };

std::optional<EnsembleKind> parse_ensemble_kind(std::string_view text);
std::string_view to_string(EnsembleKind kind);

struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::random_walk;
    std::size_t count = 0;
    double hurst_min = 0.5;
    double hurst_max = 0.5;
    double mean = 0.0;
    double std = 0.01;
    std::size_t months = 0;  // length in 21-observation months
    std::string region = "other";
};

struct RunConfig {
    std::vector<InputSpec> inputs;
    std::optional<EnsembleSpec> ensemble;
    int estimation_months = 60;
    int prediction_months = 12;
    int roll_months = 12;
    MonthRule month_rule = MonthRule::calendar;
    std::optional<Date> start_date;
    std::optional<Date> end_date;
    nn::EmbeddingConfig embedding;
    dfa::Config dfa;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "hurstnn-out";
    std::size_t workers = 1;
};

// Parses the flat `key = value` format. `#` starts a comment; unknown keys,
// duplicate scalar keys and out-of-range values are ConfigErrors. Relative
// input paths resolve against `base_dir`.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

// Throws ConfigError when parameters violate module bounds.
void validate(const RunConfig& config);

// --- Analysis ------------------------------------------------------------

struct IndexOutcome {
    std::string index_id;
    std::string region;
    std::optional<IndexSummary> summary;  // missing when the index failed
    std::vector<WindowResult> windows;
    std::string error_code = "ok";  // "ok" or a machine-readable failure code
    std::string error_message;

    bool ok() const noexcept { return summary.has_value(); }
};

struct AnalysisArtifacts {
    std::vector<IndexOutcome> indexes;  // input order
    std::optional<CrossSectionReport> report;
    std::string report_error;

    int exit_code() const;
};

// Series to analyse: ingested inputs (optionally filtered to the configured
// date range or replaced by matched random walks) or a synthetic ensemble.
struct TaggedSeries {
    ReturnSeries returns;
    std::string region;
};

std::vector<TaggedSeries> load_series(const RunConfig& config);

AnalysisArtifacts run_analyze(const RunConfig& config);

std::string format_windows_csv(const AnalysisArtifacts& artifacts);
std::string format_summary_csv(const AnalysisArtifacts& artifacts);
std::string format_scatter_csv(const AnalysisArtifacts& artifacts);
std::string format_report_json(const std::optional<CrossSectionReport>& report, std::string_view error = {});

// Writes windows.csv, summary.csv, scatter.csv and report.json.
void write_artifacts(const AnalysisArtifacts& artifacts, const std::filesystem::path& dir);

// --- Synthetic export ----------------------------------------------------

// One price CSV per generated index; returns the written paths.
std::vector<std::filesystem::path> run_synth(const RunConfig& config, const std::filesystem::path& dir);

// --- Re-correlation and reporting ----------------------------------------

// Summaries from a summary.csv or scatter.csv file.
std::vector<IndexSummary> parse_summary_csv(std::string_view text);
CrossSectionReport parse_report_json(std::string_view text);
std::string pretty_report(const CrossSectionReport& report);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace hurstnn::app
