// hurstnn: rolling Hurst exponent vs nearest-neighbour hit rate analysis.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "hurstnn/app.hpp"

namespace fs = std::filesystem;
using namespace hurstnn;

namespace {

app::RunConfig configure(const fs::path& config_path, const std::optional<fs::path>& out,
                         const std::optional<std::uint64_t>& seed) {
    app::RunConfig config = app::load_config(config_path);
    if (out) config.output_dir = *out;
    if (seed) config.seed = *seed;
    return config;
}

int analyze(const app::RunConfig& config) {
    const app::AnalysisArtifacts artifacts = app::run_analyze(config);
    app::write_artifacts(artifacts, config.output_dir);

    std::size_t failed = 0;
    for (const auto& idx : artifacts.indexes) {
        if (!idx.ok()) {
            ++failed;
            std::cerr << "warning: " << idx.index_id << " [" << idx.error_code << "] " << idx.error_message << "\n";
        }
    }
    std::cout << "analyzed " << artifacts.indexes.size() - failed << "/" << artifacts.indexes.size()
              << " indexes, artifacts in " << config.output_dir.string() << "\n";
    if (artifacts.report)
        std::cout << app::pretty_report(*artifacts.report);
    else
        std::cerr << "warning: no cross-section report: " << artifacts.report_error << "\n";
    return artifacts.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Rolling DFA Hurst exponent and nearest-neighbour hit-rate analysis"};
    cli.require_subcommand(1);

    fs::path config_path;
    std::optional<fs::path> out;
    std::optional<std::uint64_t> seed;

    auto* analyze_cmd = cli.add_subcommand("analyze", "Run the rolling pipeline and write artifacts");
    analyze_cmd->add_option("--config", config_path, "Run configuration file")->required();
    analyze_cmd->add_option("--out", out, "Output directory (overrides output_dir)");
    analyze_cmd->add_option("--seed", seed, "Seed (overrides seed)");

    auto* synth_cmd = cli.add_subcommand("synth", "Write synthetic price series as CSV files");
    synth_cmd->add_option("--config", config_path, "Run configuration file with synthetic_* keys")->required();
    synth_cmd->add_option("--out", out, "Output directory (overrides output_dir)");
    synth_cmd->add_option("--seed", seed, "Seed (overrides seed)");

    fs::path summary_path;
    auto* correlate_cmd = cli.add_subcommand("correlate", "Recompute the cross-section from a summary CSV");
    correlate_cmd->add_option("summary", summary_path, "summary.csv or scatter.csv")->required();
    correlate_cmd->add_option("--out", out, "Directory for report.json");

    fs::path report_path;
    auto* report_cmd = cli.add_subcommand("report", "Pretty-print a correlation report");
    report_cmd->add_option("report", report_path, "report.json")->required();

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = cli.exit(e);
        return rc == 0 ? app::kExitSuccess : app::kExitInputError;
    }

    try {
        if (*analyze_cmd) return analyze(configure(config_path, out, seed));

        if (*synth_cmd) {
            const app::RunConfig config = configure(config_path, out, seed);
            const auto files = app::run_synth(config, config.output_dir);
            for (const auto& f : files) std::cout << f.string() << "\n";
            return app::kExitSuccess;
        }

        if (*correlate_cmd) {
            const auto summaries = app::parse_summary_csv(app::read_file(summary_path));
            const CrossSectionReport report = cross_section(summaries);
            if (out) app::write_file(*out / "report.json", app::format_report_json(report));
            std::cout << app::pretty_report(report);
            return app::kExitSuccess;
        }

        if (*report_cmd) {
            std::cout << app::pretty_report(app::parse_report_json(app::read_file(report_path)));
            return app::kExitSuccess;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return app::kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return app::kExitInputError;
    }
    return app::kExitInputError;
}
