#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace hurstnn::nn {

// Delay-embedding nearest-neighbour direction forecaster.
//
// Indices are 0-based throughout: the pattern anchored at n is
// [x_n, x_{n-tau}, ..., x_{n-(m-1)tau}] and its successor is x_{n+1}.

struct EmbeddingConfig {
    std::size_t embedding_dim = 4;  // m
    std::size_t time_delay = 1;     // tau
    std::size_t neighbor_count = 0; // K; 0 selects floor(sqrt(#patterns))
    double keep_fraction = 0.5;     // K* = max(1, ceil(keep_fraction * K))
    std::optional<std::size_t> exclusion_window;  // default (m-1)*tau + 1

    std::size_t span() const noexcept { return (embedding_dim - 1) * time_delay; }
    std::size_t effective_exclusion() const noexcept { return exclusion_window.value_or(span() + 1); }
};

// Throws ParameterError for m, tau < 1 or keep_fraction outside (0, 1].
void validate(const EmbeddingConfig& config);

class PatternMatrix {
public:
    PatternMatrix(std::span<const double> series, std::size_t embedding_dim, std::size_t time_delay);

    std::size_t size() const noexcept { return anchors_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t time_delay() const noexcept { return delay_; }
    std::span<const double> pattern(std::size_t row) const noexcept {
        return {values_.data() + row * dim_, dim_};
    }
    const std::vector<std::size_t>& anchors() const noexcept { return anchors_; }

private:
    std::size_t dim_;
    std::size_t delay_;
    std::vector<double> values_;  // row-major, one row per anchor
    std::vector<std::size_t> anchors_;
};

// Every pattern of the series, ordered by anchor. Requires at least one
// pattern plus its successor: size >= (m-1)*tau + 2.
PatternMatrix embed(std::span<const double> series, std::size_t embedding_dim, std::size_t time_delay);

// Pattern of dimension m anchored at `anchor`, read backwards with stride tau.
std::vector<double> pattern_at(std::span<const double> series, std::size_t anchor, std::size_t embedding_dim,
                               std::size_t time_delay);

double squared_distance(std::span<const double> a, std::span<const double> b);

struct NeighborMatch {
    std::size_t anchor_index = 0;
    double distance = 0.0;
    double successor_return = 0.0;

    bool operator==(const NeighborMatch&) const = default;
};

// Restricts which matrix rows may be returned by select_neighbors.
struct NeighborSearch {
    std::size_t target_anchor = 0;
    std::size_t k = 1;
    std::size_t exclusion_window = 0;  // reject |anchor - target_anchor| < exclusion_window
    std::size_t history_begin = 0;     // the whole pattern must start at or after this index
    std::size_t history_end = 0;       // successor index must be < history_end
};

// The k admissible patterns closest to `target`, ascending in distance with
// ties broken by the smaller anchor. `series` is the one the matrix was
// built from and supplies successors. Throws InsufficientHistory when fewer
// than k candidates are admissible.
std::vector<NeighborMatch> select_neighbors(std::span<const double> target, const PatternMatrix& matrix,
                                            std::span<const double> series, const NeighborSearch& search);

struct Confirmation {
    std::vector<NeighborMatch> matches;  // distances are the m+1 distances
    std::size_t dropped = 0;             // candidates without m+1 history
    bool fell_back = false;              // every candidate dropped; input returned
};

// Re-ranks candidates at embedding m+1 (same tau) and keeps the
// max(1, ceil(keep_fraction * K)) closest.
Confirmation confirm_neighbors(std::span<const NeighborMatch> candidates, std::span<const double> series,
                               std::size_t embedding_dim, std::size_t time_delay, std::size_t target_anchor,
                               double keep_fraction);

enum class Direction { up, down };

struct DirectionForecast {
    Direction direction = Direction::up;
    std::size_t up_votes = 0;
    std::size_t down_votes = 0;
    std::size_t confirmed_count = 0;
    double mean_successor = 0.0;  // magnitude forecast, diagnostic only
};

// Majority vote over successor signs; zero successors vote down. A tied
// vote follows the sign of the mean successor, and a zero mean goes up.
DirectionForecast forecast_direction(std::span<const NeighborMatch> confirmed);

struct HitRateRecord {
    std::size_t trading_days = 0;
    std::size_t scored_days = 0;  // days with a non-zero actual return
    std::size_t hits = 0;
    std::optional<double> hit_rate;  // missing when scored_days == 0
};

HitRateRecord hit_rate(std::span<const DirectionForecast> forecasts, std::span<const double> actual_returns);

struct WindowPrediction {
    HitRateRecord record;
    std::vector<DirectionForecast> forecasts;
    std::size_t neighbor_count = 0;  // K actually used
    std::size_t confirm_fallbacks = 0;
};

// Forecasts each prediction day from a history of fixed length
// estimation.size() that slides forward one day per forecast.
WindowPrediction predict_window(std::span<const double> estimation, std::span<const double> prediction,
                                const EmbeddingConfig& config);

}  // namespace hurstnn::nn
