#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hurstnn::dfa {

// Cumulative sum of mean deviations, y(i) = sum_{k<=i} (x(k) - mean).
struct Profile {
    std::vector<double> values;
    double source_mean = 0.0;

    std::size_t size() const noexcept { return values.size(); }
};

struct FluctuationPoint {
    std::size_t scale = 0;       // box length n
    double fluctuation = 0.0;    // F(n)
    std::size_t boxes_used = 0;  // floor(N / n)
};

struct HurstFit {
    double hurst = 0.0;
    double log_constant = 0.0;  // ln c in F(n) ~ c * n^H
    double r_squared = 0.0;
    std::vector<FluctuationPoint> points;  // points entering the regression
    std::size_t dropped_points = 0;        // zero-fluctuation points left out

    // H outside [0, 1] is suspicious but not rejected.
    bool out_of_range() const noexcept { return hurst < 0.0 || hurst > 1.0; }
};

struct Config {
    std::size_t min_scale = 4;
    std::size_t max_scale = 0;  // 0 selects length / 4
    std::size_t scale_count = 20;
};

inline constexpr std::size_t kMinScale = 4;
inline constexpr std::size_t kMinFitPoints = 4;
inline constexpr std::size_t kMinSeriesLength = 8;

// Throws InsufficientHistory on an empty series.
Profile profile(std::span<const double> series);

// Detrends the profile in floor(N/n) non-overlapping front-anchored boxes
// with a least-squares line per box and returns the RMS residual over the
// covered points. Needs 4 <= scale and at least two boxes.
FluctuationPoint fluctuation(const Profile& profile, std::size_t scale);

// Roughly log-spaced unique integer scales in [min_scale, max_scale], both
// endpoints included. Requires min_scale >= 4, max_scale <= length / 4,
// min_scale < max_scale and count >= 4.
std::vector<std::size_t> scale_grid(std::size_t length, std::size_t min_scale, std::size_t max_scale,
                                    std::size_t count);

// Least-squares fit of ln F(n) against ln n.
HurstFit fit_hurst(std::span<const FluctuationPoint> points);

// Full pipeline: profile, scale grid, fluctuations, fit.
HurstFit estimate_hurst(std::span<const double> series, const Config& config = {});

}  // namespace hurstnn::dfa
