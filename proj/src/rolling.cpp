#include "hurstnn/rolling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hurstnn {

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

WindowResult run_window(std::span<const double> returns, const Window& window, std::size_t window_index,
                        const nn::EmbeddingConfig& embedding, const dfa::Config& dfa_config) {
    WindowResult result;
    result.window_index = window_index;
    result.window = window;
    const auto estimation = returns.subspan(window.estimation.begin, window.estimation.size());
    const auto prediction = returns.subspan(window.prediction.begin, window.prediction.size());

    try {
        const dfa::HurstFit fit = dfa::estimate_hurst(estimation, dfa_config);
        result.hurst = fit.hurst;
        result.r_squared = fit.r_squared;
        result.dropped_scales = fit.dropped_points;
    } catch (const Error& e) {
        result.error = std::string("dfa: ") + e.what();
    }

    try {
        const nn::WindowPrediction p = nn::predict_window(estimation, prediction, embedding);
        result.hits = p.record;
        result.hit = p.record.hit_rate;
        result.neighbor_count = p.neighbor_count;
        result.confirm_fallbacks = p.confirm_fallbacks;
    } catch (const Error& e) {
        if (!result.error.empty()) result.error += "; ";
        result.error += std::string("nn: ") + e.what();
    }
    return result;
}

IndexRun run_index(const ReturnSeries& returns, const WindowSchedule& schedule,
                   const nn::EmbeddingConfig& embedding, const dfa::Config& dfa_config, std::string region) {
    nn::validate(embedding);
    for (const auto& w : schedule.windows) {
        if (w.prediction.end > returns.size() || w.prediction.begin != w.estimation.end)
            throw ParameterError("window schedule does not fit series '" + returns.index_id() + "'");
    }

    IndexRun run;
    run.summary.index_id = returns.index_id();
    run.summary.region = std::move(region);
    run.summary.window_count = schedule.windows.size();
    run.windows.reserve(schedule.windows.size());

    double hurst_sum = 0.0, hit_sum = 0.0;
    for (std::size_t i = 0; i < schedule.windows.size(); ++i) {
        WindowResult r = run_window(returns.values(), schedule.windows[i], i, embedding, dfa_config);
        if (r.hurst) {
            hurst_sum += *r.hurst;
            ++run.summary.hurst_windows;
        }
        if (r.hit) {
            hit_sum += *r.hit;
            ++run.summary.hit_windows;
        }
        run.windows.push_back(std::move(r));
    }

    if (run.summary.hurst_windows == 0 && run.summary.hit_windows == 0) {
        std::string first_error = run.windows.empty() ? "no windows" : run.windows.front().error;
        throw IndexError("every window of '" + returns.index_id() + "' failed: " + first_error,
                         std::move(run.windows));
    }
    if (run.summary.hurst_windows > 0)
        run.summary.mean_hurst = hurst_sum / static_cast<double>(run.summary.hurst_windows);
    if (run.summary.hit_windows > 0)
        run.summary.mean_hit = hit_sum / static_cast<double>(run.summary.hit_windows);
    return run;
}

std::string_view to_string(Quadrant q) {
    switch (q) {
        case Quadrant::high_h_high_hit: return "high-H/high-hit";
        case Quadrant::high_h_low_hit: return "high-H/low-hit";
        case Quadrant::low_h_high_hit: return "low-H/high-hit";
        case Quadrant::low_h_low_hit: return "low-H/low-hit";
    }
    return "low-H/low-hit";
}

std::optional<Quadrant> parse_quadrant(std::string_view text) {
    for (Quadrant q : {Quadrant::high_h_high_hit, Quadrant::high_h_low_hit, Quadrant::low_h_high_hit,
                       Quadrant::low_h_low_hit})
        if (to_string(q) == text) return q;
    return std::nullopt;
}

double median(std::vector<double> values) {
    if (values.empty()) throw ParameterError("median of an empty sequence");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ParameterError("correlation inputs differ in length");
    if (x.size() < 2) throw ParameterError("correlation needs at least two pairs");
    const auto n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ParameterError("correlation inputs differ in length");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson(rx, ry);
}

Quadrant quadrant_of(double mean_hurst, double mean_hit, double hurst_median, double hit_median) {
    const bool high_h = mean_hurst > hurst_median;
    const bool high_hit = mean_hit > hit_median;
    if (high_h) return high_hit ? Quadrant::high_h_high_hit : Quadrant::high_h_low_hit;
    return high_hit ? Quadrant::low_h_high_hit : Quadrant::low_h_low_hit;
}

CrossSectionReport cross_section(std::span<const IndexSummary> summaries) {
    std::vector<const IndexSummary*> usable;
    for (const auto& s : summaries)
        if (s.mean_hurst && s.mean_hit) usable.push_back(&s);
    if (usable.size() < kMinCrossSection)
        throw ParameterError("cross-section needs at least " + std::to_string(kMinCrossSection) +
                             " indexes with both means, got " + std::to_string(usable.size()));

    std::vector<double> h, hit;
    h.reserve(usable.size());
    hit.reserve(usable.size());
    for (const auto* s : usable) {
        h.push_back(*s->mean_hurst);
        hit.push_back(*s->mean_hit);
    }

    CrossSectionReport report;
    report.n_indexes = usable.size();
    report.pearson = pearson(h, hit);
    report.hurst_median = median(h);
    report.hit_median = median(hit);
    report.quadrants.reserve(usable.size());
    for (std::size_t i = 0; i < usable.size(); ++i) {
        report.quadrants.push_back({usable[i]->index_id, h[i], hit[i],
                                    quadrant_of(h[i], hit[i], report.hurst_median, report.hit_median)});
    }
    return report;
}

std::vector<Quadrant> classify_quadrants(const CrossSectionReport& report) {
    std::vector<Quadrant> labels;
    labels.reserve(report.quadrants.size());
    for (const auto& q : report.quadrants)
        labels.push_back(quadrant_of(q.mean_hurst, q.mean_hit, report.hurst_median, report.hit_median));
    return labels;
}

}  // namespace hurstnn
