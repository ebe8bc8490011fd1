#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hurstnn/dfa.hpp"
#include "hurstnn/errors.hpp"
#include "hurstnn/nn_forecast.hpp"
#include "hurstnn/series.hpp"

namespace hurstnn {

struct WindowResult {
    std::size_t window_index = 0;
    Window window;
    std::optional<double> hurst;  // H over the estimation range
    std::optional<double> hit;    // hit rate over the prediction range
    double r_squared = 0.0;
    std::size_t dropped_scales = 0;
    nn::HitRateRecord hits;
    std::size_t neighbor_count = 0;
    std::size_t confirm_fallbacks = 0;
    std::string error;  // empty unless part of the window failed
};

struct IndexSummary {
    std::string index_id;
    std::optional<double> mean_hurst;
    std::optional<double> mean_hit;
    std::size_t window_count = 0;  // scheduled windows
    std::size_t hurst_windows = 0;  // windows contributing to mean_hurst
    std::size_t hit_windows = 0;    // windows contributing to mean_hit
    std::string region;

    bool operator==(const IndexSummary&) const = default;
};

struct IndexRun {
    IndexSummary summary;
    std::vector<WindowResult> windows;
};

// Raised when no window of an index produced a Hurst exponent or hit rate.
class IndexError : public Error {
public:
    IndexError(const std::string& what, std::vector<WindowResult> windows)
        : Error(what), windows_(std::move(windows)) {}
    const std::vector<WindowResult>& windows() const noexcept { return windows_; }

private:
    std::vector<WindowResult> windows_;
};

// Rolling protocol for one index: DFA on each estimation range and the
// nearest-neighbour hit rate on the matching prediction range, averaged
// over the windows where each value is available.
IndexRun run_index(const ReturnSeries& returns, const WindowSchedule& schedule,
                   const nn::EmbeddingConfig& embedding, const dfa::Config& dfa_config,
                   std::string region = {});

WindowResult run_window(std::span<const double> returns, const Window& window, std::size_t window_index,
                        const nn::EmbeddingConfig& embedding, const dfa::Config& dfa_config);

enum class Quadrant { high_h_high_hit, high_h_low_hit, low_h_high_hit, low_h_low_hit };

std::string_view to_string(Quadrant q);
std::optional<Quadrant> parse_quadrant(std::string_view text);

struct QuadrantEntry {
    std::string index_id;
    double mean_hurst = 0.0;
    double mean_hit = 0.0;
    Quadrant label = Quadrant::low_h_low_hit;
};

struct CrossSectionReport {
    std::optional<double> pearson;  // missing when either axis has zero variance
    std::size_t n_indexes = 0;
    double hurst_median = 0.0;
    double hit_median = 0.0;
    std::vector<QuadrantEntry> quadrants;
};

inline constexpr std::size_t kMinCrossSection = 3;

// Pearson correlation of (mean H, mean hit) over summaries having both,
// with per-axis medians and quadrant labels. Throws ParameterError with
// fewer than three usable pairs.
CrossSectionReport cross_section(std::span<const IndexSummary> summaries);

// Strictly above the median is "high"; ties go to the low side.
Quadrant quadrant_of(double mean_hurst, double mean_hit, double hurst_median, double hit_median);

// Labels for every entry of the report, recomputed from its medians.
std::vector<Quadrant> classify_quadrants(const CrossSectionReport& report);

double median(std::vector<double> values);
// Both return nullopt when either input has zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

}  // namespace hurstnn
