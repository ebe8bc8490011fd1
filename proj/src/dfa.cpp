#include "hurstnn/dfa.hpp"

#include <cmath>
#include <string>

#include "hurstnn/errors.hpp"

namespace hurstnn::dfa {

Profile profile(std::span<const double> series) {
    if (series.empty()) throw InsufficientHistory("DFA profile", 1, 0);

    double sum = 0.0;
    for (double x : series) sum += x;
    const double mean = sum / static_cast<double>(series.size());

    Profile out;
    out.source_mean = mean;
    out.values.resize(series.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        acc += series[i] - mean;
        out.values[i] = acc;
    }
    return out;
}

FluctuationPoint fluctuation(const Profile& profile, std::size_t scale) {
    const std::size_t n = profile.size();
    if (scale < kMinScale || scale > n / 2)
        throw ParameterError("DFA scale " + std::to_string(scale) + " outside [" + std::to_string(kMinScale) +
                             ", " + std::to_string(n / 2) + "] for a profile of length " + std::to_string(n));

    const std::size_t boxes = n / scale;
    // Box abscissae 0..scale-1 are centred, so the slope and intercept
    // decouple and the residual follows from centred sums.
    const double s = static_cast<double>(scale);
    const double x_mean = (s - 1.0) / 2.0;
    const double sxx = s * (s * s - 1.0) / 12.0;

    double residual_sq = 0.0;
    for (std::size_t b = 0; b < boxes; ++b) {
        const double* y = profile.values.data() + b * scale;
        double y_sum = 0.0;
        for (std::size_t i = 0; i < scale; ++i) y_sum += y[i];
        const double y_mean = y_sum / s;

        double sxy = 0.0;
        for (std::size_t i = 0; i < scale; ++i) sxy += (static_cast<double>(i) - x_mean) * (y[i] - y_mean);
        const double slope = sxy / sxx;

        for (std::size_t i = 0; i < scale; ++i) {
            const double r = y[i] - y_mean - slope * (static_cast<double>(i) - x_mean);
            residual_sq += r * r;
        }
    }

    FluctuationPoint point;
    point.scale = scale;
    point.boxes_used = boxes;
    point.fluctuation = std::sqrt(residual_sq / static_cast<double>(boxes * scale));
    return point;
}

std::vector<std::size_t> scale_grid(std::size_t length, std::size_t min_scale, std::size_t max_scale,
                                    std::size_t count) {
    if (min_scale < kMinScale || max_scale > length / 4 || min_scale >= max_scale || count < 4)
        throw ParameterError("infeasible DFA scale grid: length " + std::to_string(length) + ", scales [" +
                             std::to_string(min_scale) + ", " + std::to_string(max_scale) + "], count " +
                             std::to_string(count) + " (need 4 <= min < max <= length/4, count >= 4)");

    const double lo = std::log(static_cast<double>(min_scale));
    const double hi = std::log(static_cast<double>(max_scale));
    std::vector<std::size_t> scales;
    scales.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        auto s = static_cast<std::size_t>(std::llround(std::exp(lo + t * (hi - lo))));
        if (i == 0) s = min_scale;
        if (i + 1 == count) s = max_scale;
        if (scales.empty() || s > scales.back()) scales.push_back(s);
    }
    return scales;
}

HurstFit fit_hurst(std::span<const FluctuationPoint> points) {
    HurstFit fit;
    for (const auto& p : points) {
        if (p.fluctuation > 0.0 && std::isfinite(p.fluctuation) && p.scale > 0)
            fit.points.push_back(p);
        else
            ++fit.dropped_points;
    }
    if (fit.points.size() < kMinFitPoints)
        throw FitError("Hurst fit needs at least " + std::to_string(kMinFitPoints) +
                       " points with positive fluctuation, got " + std::to_string(fit.points.size()));

    const auto m = static_cast<double>(fit.points.size());
    double x_mean = 0.0, y_mean = 0.0;
    for (const auto& p : fit.points) {
        x_mean += std::log(static_cast<double>(p.scale));
        y_mean += std::log(p.fluctuation);
    }
    x_mean /= m;
    y_mean /= m;

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& p : fit.points) {
        const double dx = std::log(static_cast<double>(p.scale)) - x_mean;
        const double dy = std::log(p.fluctuation) - y_mean;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) throw FitError("Hurst fit needs at least two distinct scales");

    fit.hurst = sxy / sxx;
    fit.log_constant = y_mean - fit.hurst * x_mean;

    double ss_res = 0.0;
    for (const auto& p : fit.points) {
        const double r = std::log(p.fluctuation) - fit.log_constant -
                         fit.hurst * std::log(static_cast<double>(p.scale));
        ss_res += r * r;
    }
    double r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    if (r2 < 0.0) r2 = 0.0;
    if (r2 > 1.0) r2 = 1.0;
    fit.r_squared = r2;
    return fit;
}

HurstFit estimate_hurst(std::span<const double> series, const Config& config) {
    if (series.size() < kMinSeriesLength) throw InsufficientHistory("DFA", kMinSeriesLength, series.size());

    const std::size_t max_scale = config.max_scale == 0 ? series.size() / 4 : config.max_scale;
    const auto scales = scale_grid(series.size(), config.min_scale, max_scale, config.scale_count);
    const Profile prof = profile(series);

    std::vector<FluctuationPoint> points;
    points.reserve(scales.size());
    for (std::size_t s : scales) points.push_back(fluctuation(prof, s));
    return fit_hurst(points);
}

}  // namespace hurstnn::dfa
