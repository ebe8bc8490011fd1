#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hurstnn {

using Date = std::chrono::year_month_day;

// Parses a strict ISO-8601 calendar date (YYYY-MM-DD). Returns nullopt on
// any syntax error or impossible date.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(const Date& date);

// Consecutive Monday-to-Friday dates starting at the first weekday on or
// after `first`. Used to stamp synthetic series.
std::vector<Date> business_days(Date first, std::size_t count);

// Price levels P_t of one index. Invariants (checked on construction):
// at least two observations, dates strictly increasing, prices finite and > 0.
class PriceSeries {
public:
    PriceSeries(std::string index_id, std::vector<Date> dates, std::vector<double> prices);

    const std::string& index_id() const noexcept { return index_id_; }
    const std::vector<Date>& dates() const noexcept { return dates_; }
    const std::vector<double>& prices() const noexcept { return prices_; }
    std::size_t size() const noexcept { return prices_.size(); }

private:
    std::string index_id_;
    std::vector<Date> dates_;
    std::vector<double> prices_;
};

// Log returns R_t = ln P_t - ln P_{t-1}, each stamped with the later date
// of its price pair.
class ReturnSeries {
public:
    ReturnSeries(std::string index_id, std::vector<Date> dates, std::vector<double> returns);

    const std::string& index_id() const noexcept { return index_id_; }
    const std::vector<Date>& dates() const noexcept { return dates_; }
    const std::vector<double>& returns() const noexcept { return returns_; }
    std::span<const double> values() const noexcept { return returns_; }
    std::size_t size() const noexcept { return returns_.size(); }

    // Observations whose date lies in [first, last]; either bound may be open.
    ReturnSeries between(std::optional<Date> first, std::optional<Date> last) const;

private:
    std::string index_id_;
    std::vector<Date> dates_;
    std::vector<double> returns_;
};

ReturnSeries log_returns(const PriceSeries& prices);

// Inverse of log_returns: start_price * exp(cumulative sum). The price date
// preceding the first return is taken as `start_date`.
PriceSeries prices_from_returns(const ReturnSeries& returns, double start_price, Date start_date);

// How observations are grouped into months.
enum class MonthRule {
    calendar,         // calendar month of each return's date
    synthetic_21_day  // exactly 21 consecutive observations per month
};

inline constexpr std::size_t kSyntheticMonthLength = 21;

std::optional<MonthRule> parse_month_rule(std::string_view text);
std::string_view to_string(MonthRule rule);

// Half-open range [begin, end) of observation indices.
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
    bool operator==(const IndexRange&) const = default;
};

struct Window {
    IndexRange estimation;
    IndexRange prediction;  // prediction.begin == estimation.end
    std::size_t start_month = 0;  // 0-based month offset of the estimation start

    bool operator==(const Window&) const = default;
};

struct WindowSchedule {
    std::vector<Window> windows;
    int estimation_months = 0;
    int prediction_months = 0;
    int roll_months = 0;
    MonthRule rule = MonthRule::calendar;

    bool operator==(const WindowSchedule&) const = default;
};

// Enumerates rolling estimation/prediction windows from the series start,
// advancing by roll_months, keeping only windows whose whole prediction
// range fits. Calendar months are counted from the month of the first
// return; a month counts as available once the series has an observation
// in it. Throws InsufficientHistory when not even one window fits.
WindowSchedule build_window_schedule(const ReturnSeries& series, int estimation_months,
                                     int prediction_months, int roll_months, MonthRule rule);

}  // namespace hurstnn
