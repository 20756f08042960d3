#pragma once

#include "causalstock/data/date.h"
#include "causalstock/data/labels.h"
#include "causalstock/data/news_items.h"
#include "causalstock/data/prices.h"

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace causalstock::data {

enum class CalendarPolicy {
    Intersection,      // only days every stock traded
    UnionForwardFill,  // all days; gaps filled from the previous observed day
    UnionDrop,         // all days; windows touching a gap are dropped
};

// D stocks on one trading calendar. Indexed [stock][day].
struct AlignedPanel {
    std::vector<std::string> symbols;
    std::vector<Date> dates;
    std::vector<std::vector<PriceRecord>> prices;
    // False where the stock has no usable record for the day (gap without a
    // fill). Windows never cover unavailable stock-days.
    std::vector<std::vector<bool>> available;
    // Movement from day t-1 to day t; day 0 carries Skip and is never a target.
    std::vector<std::vector<Movement>> labels;

    std::size_t stocks() const { return symbols.size(); }
    std::size_t days() const { return dates.size(); }
};

AlignedPanel align(const std::vector<PriceSeries>& series, CalendarPolicy policy, const LabelMode& mode);

// One training sample: L lags before target day T for all D stocks.
// Lag index k (0-based) is day T-(k+1), so k = 0 is the most recent day and
// matches graph lag l = k + 1.
struct MarketWindow {
    Date target;
    std::size_t target_index = 0;  // day index in the panel
    std::size_t stocks = 0;
    std::size_t lags = 0;
    std::vector<std::array<double, kPriceFeatures>> prices;  // [stock * lags + k], raw
    std::vector<std::vector<news::NewsScore>> news;          // [stock * lags + k], oldest first
    std::vector<Movement> labels;                            // [stock]

    const std::array<double, kPriceFeatures>& price(std::size_t stock, std::size_t lag) const {
        return prices[stock * lags + lag];
    }
    const std::vector<news::NewsScore>& news_at(std::size_t stock, std::size_t lag) const {
        return news[stock * lags + lag];
    }
};

// Scored news bucketed to the first trading day on or after its UTC date.
// Indexed [stock][day]; each list is ordered by publish time.
using NewsByDay = std::vector<std::vector<std::vector<ScoredNews>>>;
NewsByDay bucket_news(const AlignedPanel& panel, const std::vector<ScoredNews>& scored);

// One window per target day with L available predecessors. News lists keep
// the `max_news` most recent items. L < 1 is a configuration error.
std::vector<MarketWindow> build_windows(const AlignedPanel& panel, const NewsByDay* news, std::size_t lags,
                                        std::size_t max_news);

struct SplitDates {
    Date valid_start;
    Date test_start;
};

struct Splits {
    std::vector<MarketWindow> train;
    std::vector<MarketWindow> valid;
    std::vector<MarketWindow> test;
    std::vector<std::string> warnings;
};

// Assigns each window by its target date: train < valid_start <= valid <
// test_start <= test. Lag days may fall in an earlier period.
Splits chronological_split(std::vector<MarketWindow> windows, const SplitDates& dates);

// Per-feature z-score fitted on training stock-days only.
struct Normalizer {
    std::array<double, kPriceFeatures> mean{};
    std::array<double, kPriceFeatures> stddev{1, 1, 1, 1, 1, 1};

    std::array<double, kPriceFeatures> apply(const std::array<double, kPriceFeatures>& raw) const;

    nlohmann::json to_json() const;
    static Normalizer from_json(const nlohmann::json& j);
};

// Statistics over available stock-days strictly before `valid_start`.
Normalizer fit_normalizer(const AlignedPanel& panel, const Date& valid_start);

}  // namespace causalstock::data
