#include "hurstnn/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "hurstnn/errors.hpp"

namespace hurstnn {

namespace {

bool parse_digits(std::string_view text, int& out) {
    if (text.empty()) return false;
    for (char c : text)
        if (c < '0' || c > '9') return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

void check_dates_increasing(const std::vector<Date>& dates, const char* what) {
    for (std::size_t i = 1; i < dates.size(); ++i) {
        if (!(dates[i - 1] < dates[i]))
            throw InputError(std::string(what) + ": dates must be strictly increasing, got " +
                                 format_date(dates[i]) + " after " + format_date(dates[i - 1]),
                             i + 1);
    }
}

long month_key(const Date& d) {
    return static_cast<long>(static_cast<int>(d.year())) * 12 + static_cast<long>(static_cast<unsigned>(d.month())) - 1;
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    int y = 0, m = 0, d = 0;
    if (!parse_digits(text.substr(0, 4), y) || !parse_digits(text.substr(5, 2), m) ||
        !parse_digits(text.substr(8, 2), d))
        return std::nullopt;
    Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
              std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok()) return std::nullopt;
    return date;
}

std::string format_date(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

std::vector<Date> business_days(Date first, std::size_t count) {
    using std::chrono::days;
    using std::chrono::sys_days;
    using std::chrono::weekday;
    std::vector<Date> out;
    out.reserve(count);
    sys_days day{first};
    while (out.size() < count) {
        const unsigned wd = weekday{day}.c_encoding();
        if (wd != 0 && wd != 6) out.emplace_back(day);
        day += days{1};
    }
    return out;
}

PriceSeries::PriceSeries(std::string index_id, std::vector<Date> dates, std::vector<double> prices)
    : index_id_(std::move(index_id)), dates_(std::move(dates)), prices_(std::move(prices)) {
    if (dates_.size() != prices_.size())
        throw InputError("price series '" + index_id_ + "': " + std::to_string(dates_.size()) +
                         " dates but " + std::to_string(prices_.size()) + " prices");
    if (prices_.size() < 2)
        throw InputError("price series '" + index_id_ + "' needs at least 2 observations, got " +
                         std::to_string(prices_.size()));
    for (std::size_t i = 0; i < prices_.size(); ++i) {
        if (!std::isfinite(prices_[i]) || prices_[i] <= 0.0)
            throw InputError("price series '" + index_id_ + "': non-positive price " +
                                 std::to_string(prices_[i]),
                             i + 1);
    }
    check_dates_increasing(dates_, "price series");
}

ReturnSeries::ReturnSeries(std::string index_id, std::vector<Date> dates, std::vector<double> returns)
    : index_id_(std::move(index_id)), dates_(std::move(dates)), returns_(std::move(returns)) {
    if (dates_.size() != returns_.size())
        throw InputError("return series '" + index_id_ + "': " + std::to_string(dates_.size()) +
                         " dates but " + std::to_string(returns_.size()) + " returns");
    for (std::size_t i = 0; i < returns_.size(); ++i) {
        if (!std::isfinite(returns_[i]))
            throw InputError("return series '" + index_id_ + "': non-finite return", i + 1);
    }
    check_dates_increasing(dates_, "return series");
}

ReturnSeries ReturnSeries::between(std::optional<Date> first, std::optional<Date> last) const {
    auto lo = dates_.begin();
    auto hi = dates_.end();
    if (first) lo = std::lower_bound(dates_.begin(), dates_.end(), *first);
    if (last) hi = std::upper_bound(dates_.begin(), dates_.end(), *last);
    if (hi < lo) hi = lo;
    const auto b = static_cast<std::size_t>(lo - dates_.begin());
    const auto e = static_cast<std::size_t>(hi - dates_.begin());
    return ReturnSeries(index_id_, {dates_.begin() + b, dates_.begin() + e},
                        {returns_.begin() + b, returns_.begin() + e});
}

ReturnSeries log_returns(const PriceSeries& prices) {
    const auto& p = prices.prices();
    std::vector<double> r(p.size() - 1);
    for (std::size_t t = 0; t + 1 < p.size(); ++t) r[t] = std::log(p[t + 1]) - std::log(p[t]);
    return ReturnSeries(prices.index_id(), {prices.dates().begin() + 1, prices.dates().end()}, std::move(r));
}

PriceSeries prices_from_returns(const ReturnSeries& returns, double start_price, Date start_date) {
    if (!(start_price > 0.0) || !std::isfinite(start_price))
        throw ParameterError("start price must be positive and finite");
    std::vector<Date> dates;
    dates.reserve(returns.size() + 1);
    dates.push_back(start_date);
    dates.insert(dates.end(), returns.dates().begin(), returns.dates().end());

    std::vector<double> prices;
    prices.reserve(returns.size() + 1);
    prices.push_back(start_price);
    double log_level = std::log(start_price);
    for (double r : returns.returns()) {
        log_level += r;
        prices.push_back(std::exp(log_level));
    }
    return PriceSeries(returns.index_id(), std::move(dates), std::move(prices));
}

std::optional<MonthRule> parse_month_rule(std::string_view text) {
    if (text == "calendar") return MonthRule::calendar;
    if (text == "synthetic-21-day") return MonthRule::synthetic_21_day;
    return std::nullopt;
}

std::string_view to_string(MonthRule rule) {
    return rule == MonthRule::calendar ? "calendar" : "synthetic-21-day";
}

WindowSchedule build_window_schedule(const ReturnSeries& series, int estimation_months,
                                     int prediction_months, int roll_months, MonthRule rule) {
    if (estimation_months < 1 || prediction_months < 1 || roll_months < 1)
        throw ParameterError("estimation, prediction and roll months must all be positive");

    // Month offset of every observation, non-decreasing.
    std::vector<std::size_t> month_of(series.size());
    if (rule == MonthRule::synthetic_21_day) {
        for (std::size_t i = 0; i < month_of.size(); ++i) month_of[i] = i / kSyntheticMonthLength;
    } else if (!series.dates().empty()) {
        const long first = month_key(series.dates().front());
        for (std::size_t i = 0; i < month_of.size(); ++i)
            month_of[i] = static_cast<std::size_t>(month_key(series.dates()[i]) - first);
    }

    // Number of months available in full.
    std::size_t months_available = 0;
    if (rule == MonthRule::synthetic_21_day)
        months_available = series.size() / kSyntheticMonthLength;
    else if (!month_of.empty())
        months_available = month_of.back() + 1;

    const auto est = static_cast<std::size_t>(estimation_months);
    const auto pred = static_cast<std::size_t>(prediction_months);
    const auto roll = static_cast<std::size_t>(roll_months);
    if (months_available < est + pred) {
        if (rule == MonthRule::synthetic_21_day)
            throw InsufficientHistory("window schedule for '" + series.index_id() + "' (observations)",
                                      (est + pred) * kSyntheticMonthLength, series.size());
        throw InsufficientHistory("window schedule for '" + series.index_id() + "' (months)", est + pred,
                                  months_available);
    }

    auto first_index_of_month = [&](std::size_t month) {
        return static_cast<std::size_t>(std::lower_bound(month_of.begin(), month_of.end(), month) -
                                        month_of.begin());
    };

    WindowSchedule schedule;
    schedule.estimation_months = estimation_months;
    schedule.prediction_months = prediction_months;
    schedule.roll_months = roll_months;
    schedule.rule = rule;
    for (std::size_t start = 0; start + est + pred <= months_available; start += roll) {
        Window w;
        w.start_month = start;
        w.estimation = {first_index_of_month(start), first_index_of_month(start + est)};
        w.prediction = {w.estimation.end, first_index_of_month(start + est + pred)};
        if (w.estimation.size() == 0 || w.prediction.size() == 0) continue;  // calendar gap
        schedule.windows.push_back(w);
    }
    if (schedule.windows.empty())
        throw InsufficientHistory("window schedule for '" + series.index_id() + "' (non-empty windows)", 1, 0);
    return schedule;
}

}  // namespace hurstnn
