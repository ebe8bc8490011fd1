#include "hurstnn/nn_forecast.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hurstnn/errors.hpp"

namespace hurstnn::nn {

namespace {

bool closer(const NeighborMatch& a, const NeighborMatch& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.anchor_index < b.anchor_index;
}

void keep_closest(std::vector<NeighborMatch>& matches, std::size_t k) {
    if (k < matches.size()) {
        std::nth_element(matches.begin(), matches.begin() + static_cast<std::ptrdiff_t>(k), matches.end(), closer);
        matches.resize(k);
    }
    std::sort(matches.begin(), matches.end(), closer);
}

double extended_distance(std::span<const double> series, std::size_t a, std::size_t b, std::size_t dim,
                         std::size_t tau) {
    double d = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        const double diff = series[a - j * tau] - series[b - j * tau];
        d += diff * diff;
    }
    return d;
}

}  // namespace

void validate(const EmbeddingConfig& config) {
    if (config.embedding_dim < 1) throw ParameterError("embedding dimension must be at least 1");
    if (config.time_delay < 1) throw ParameterError("time delay must be at least 1");
    if (!(config.keep_fraction > 0.0 && config.keep_fraction <= 1.0))
        throw ParameterError("keep fraction must lie in (0, 1]");
}

PatternMatrix::PatternMatrix(std::span<const double> series, std::size_t embedding_dim, std::size_t time_delay)
    : dim_(embedding_dim), delay_(time_delay) {
    if (embedding_dim < 1 || time_delay < 1) throw ParameterError("embedding dimension and delay must be >= 1");
    const std::size_t span = (embedding_dim - 1) * time_delay;
    if (series.size() < span + 2)
        throw InsufficientHistory("delay embedding (one pattern plus successor)", span + 2, series.size());

    const std::size_t rows = series.size() - span;
    values_.resize(rows * dim_);
    anchors_.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t anchor = span + r;
        anchors_[r] = anchor;
        for (std::size_t j = 0; j < dim_; ++j) values_[r * dim_ + j] = series[anchor - j * delay_];
    }
}

PatternMatrix embed(std::span<const double> series, std::size_t embedding_dim, std::size_t time_delay) {
    return PatternMatrix(series, embedding_dim, time_delay);
}

std::vector<double> pattern_at(std::span<const double> series, std::size_t anchor, std::size_t embedding_dim,
                               std::size_t time_delay) {
    const std::size_t span = (embedding_dim - 1) * time_delay;
    if (anchor >= series.size() || anchor < span)
        throw ParameterError("no pattern of dimension " + std::to_string(embedding_dim) + " at anchor " +
                             std::to_string(anchor));
    std::vector<double> p(embedding_dim);
    for (std::size_t j = 0; j < embedding_dim; ++j) p[j] = series[anchor - j * time_delay];
    return p;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw ParameterError("pattern length mismatch: " + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        d += diff * diff;
    }
    return d;
}

std::vector<NeighborMatch> select_neighbors(std::span<const double> target, const PatternMatrix& matrix,
                                            std::span<const double> series, const NeighborSearch& search) {
    if (target.size() != matrix.dim())
        throw ParameterError("target pattern has dimension " + std::to_string(target.size()) +
                             ", matrix has " + std::to_string(matrix.dim()));
    if (search.k < 1) throw ParameterError("neighbour count must be at least 1");
    const std::size_t span = (matrix.dim() - 1) * matrix.time_delay();
    const std::size_t end = std::min(search.history_end, series.size());

    std::vector<NeighborMatch> matches;
    matches.reserve(matrix.size());
    for (std::size_t row = 0; row < matrix.size(); ++row) {
        const std::size_t anchor = matrix.anchors()[row];
        if (anchor - span < search.history_begin) continue;
        if (anchor + 1 >= end) break;  // anchors ascend
        const std::size_t gap = anchor > search.target_anchor ? anchor - search.target_anchor
                                                              : search.target_anchor - anchor;
        if (gap < search.exclusion_window) continue;
        double d = 0.0;
        const auto p = matrix.pattern(row);
        for (std::size_t j = 0; j < p.size(); ++j) {
            const double diff = target[j] - p[j];
            d += diff * diff;
        }
        matches.push_back({anchor, d, series[anchor + 1]});
    }
    if (matches.size() < search.k)
        throw InsufficientHistory("neighbour search (admissible candidates)", search.k, matches.size());
    keep_closest(matches, search.k);
    return matches;
}

Confirmation confirm_neighbors(std::span<const NeighborMatch> candidates, std::span<const double> series,
                               std::size_t embedding_dim, std::size_t time_delay, std::size_t target_anchor,
                               double keep_fraction) {
    if (candidates.empty()) throw ParameterError("confirmation needs at least one candidate");
    if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) throw ParameterError("keep fraction must lie in (0, 1]");
    const std::size_t dim = embedding_dim + 1;
    const std::size_t span = (dim - 1) * time_delay;
    if (target_anchor >= series.size() || target_anchor < span)
        throw InsufficientHistory("target pattern at embedding m+1", span + 1, target_anchor + 1);

    const auto k = candidates.size();
    const auto keep = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(keep_fraction * static_cast<double>(k) - 1e-12)));

    Confirmation out;
    out.matches.reserve(k);
    for (const auto& c : candidates) {
        if (c.anchor_index < span || c.anchor_index >= series.size()) {
            ++out.dropped;
            continue;
        }
        NeighborMatch m = c;
        m.distance = extended_distance(series, target_anchor, c.anchor_index, dim, time_delay);
        out.matches.push_back(m);
    }
    if (out.matches.empty()) {
        out.fell_back = true;
        out.matches.assign(candidates.begin(), candidates.end());
        return out;
    }
    keep_closest(out.matches, keep);
    return out;
}

DirectionForecast forecast_direction(std::span<const NeighborMatch> confirmed) {
    if (confirmed.empty()) throw ParameterError("direction forecast needs at least one neighbour");
    DirectionForecast f;
    double sum = 0.0;
    for (const auto& m : confirmed) {
        if (m.successor_return > 0.0)
            ++f.up_votes;
        else
            ++f.down_votes;
        sum += m.successor_return;
    }
    f.confirmed_count = confirmed.size();
    f.mean_successor = sum / static_cast<double>(confirmed.size());
    if (f.up_votes != f.down_votes)
        f.direction = f.up_votes > f.down_votes ? Direction::up : Direction::down;
    else
        f.direction = f.mean_successor < 0.0 ? Direction::down : Direction::up;
    return f;
}

HitRateRecord hit_rate(std::span<const DirectionForecast> forecasts, std::span<const double> actual_returns) {
    if (forecasts.size() != actual_returns.size())
        throw ParameterError("hit rate needs one actual return per forecast, got " +
                             std::to_string(forecasts.size()) + " forecasts and " +
                             std::to_string(actual_returns.size()) + " returns");
    HitRateRecord rec;
    rec.trading_days = forecasts.size();
    for (std::size_t i = 0; i < forecasts.size(); ++i) {
        const double r = actual_returns[i];
        if (r == 0.0) continue;
        ++rec.scored_days;
        const Direction actual = r > 0.0 ? Direction::up : Direction::down;
        if (forecasts[i].direction == actual) ++rec.hits;
    }
    if (rec.scored_days > 0)
        rec.hit_rate = static_cast<double>(rec.hits) / static_cast<double>(rec.scored_days);
    return rec;
}

WindowPrediction predict_window(std::span<const double> estimation, std::span<const double> prediction,
                                const EmbeddingConfig& config) {
    validate(config);
    if (prediction.empty()) throw ParameterError("prediction range is empty");
    const std::size_t m = config.embedding_dim;
    const std::size_t tau = config.time_delay;
    const std::size_t span = config.span();
    const std::size_t length = estimation.size();
    // The target needs m+1 history for confirmation and at least one
    // candidate with a successor must exist.
    if (length < m * tau + 2) throw InsufficientHistory("nearest-neighbour estimation window", m * tau + 2, length);

    std::vector<double> combined;
    combined.reserve(length + prediction.size());
    combined.insert(combined.end(), estimation.begin(), estimation.end());
    combined.insert(combined.end(), prediction.begin(), prediction.end() - 1);
    const std::span<const double> all(combined);
    const PatternMatrix matrix(all, m, tau);

    WindowPrediction out;
    const std::size_t patterns = length - span;
    out.neighbor_count = config.neighbor_count > 0
                             ? config.neighbor_count
                             : std::max<std::size_t>(1, static_cast<std::size_t>(
                                                            std::floor(std::sqrt(static_cast<double>(patterns)))));
    out.forecasts.reserve(prediction.size());

    for (std::size_t day = 0; day < prediction.size(); ++day) {
        const std::size_t target_anchor = day + length - 1;
        const auto target = matrix.pattern(target_anchor - span);

        NeighborSearch search;
        search.target_anchor = target_anchor;
        search.k = out.neighbor_count;
        search.exclusion_window = config.effective_exclusion();
        search.history_begin = day;
        search.history_end = day + length;
        auto candidates = select_neighbors(target, matrix, all, search);

        // Confirmation sees only the sliding history, so anchors are local.
        for (auto& c : candidates) c.anchor_index -= day;
        const auto history = all.subspan(day, length);
        const Confirmation confirmed =
            confirm_neighbors(candidates, history, m, tau, length - 1, config.keep_fraction);
        if (confirmed.fell_back) ++out.confirm_fallbacks;

        out.forecasts.push_back(forecast_direction(confirmed.matches));
    }
    out.record = hit_rate(out.forecasts, prediction);
    return out;
}

}  // namespace hurstnn::nn
