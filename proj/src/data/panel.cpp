#include "causalstock/data/panel.h"

#include "causalstock/error.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

namespace causalstock::data {

AlignedPanel align(const std::vector<PriceSeries>& series, CalendarPolicy policy, const LabelMode& mode) {
    if (series.empty()) throw ConfigError("cannot align an empty stock list");
    AlignedPanel panel;
    std::set<std::string> seen;
    for (const auto& s : series) {
        if (!seen.insert(s.symbol).second) throw ConfigError("duplicate symbol " + s.symbol);
        panel.symbols.push_back(s.symbol);
    }

    if (policy == CalendarPolicy::Intersection) {
        std::map<Date, std::size_t> counts;
        for (const auto& s : series) {
            for (const auto& r : s.records) ++counts[r.date];
        }
        for (const auto& [d, n] : counts) {
            if (n == series.size()) panel.dates.push_back(d);
        }
    } else {
        std::set<Date> all;
        for (const auto& s : series) {
            for (const auto& r : s.records) all.insert(r.date);
        }
        panel.dates.assign(all.begin(), all.end());
    }

    const std::size_t days = panel.dates.size();
    panel.prices.assign(series.size(), std::vector<PriceRecord>(days));
    panel.available.assign(series.size(), std::vector<bool>(days, false));
    panel.labels.assign(series.size(), std::vector<Movement>(days, Movement::Skip));

    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& recs = series[s].records;
        std::size_t cursor = 0;
        bool have_prev = false;
        PriceRecord prev;
        for (std::size_t t = 0; t < days; ++t) {
            while (cursor < recs.size() && recs[cursor].date < panel.dates[t]) ++cursor;
            if (cursor < recs.size() && recs[cursor].date == panel.dates[t]) {
                prev = recs[cursor];
                have_prev = true;
                panel.prices[s][t] = prev;
                panel.available[s][t] = true;
            } else if (policy == CalendarPolicy::UnionForwardFill && have_prev) {
                PriceRecord filled = prev;
                filled.date = panel.dates[t];
                filled.open = filled.high = filled.low = filled.close;
                filled.volume = 0.0;
                panel.prices[s][t] = filled;
                panel.available[s][t] = true;
            }
        }
        for (std::size_t t = 1; t < days; ++t) {
            if (panel.available[s][t] && panel.available[s][t - 1]) {
                panel.labels[s][t] = movement_label(panel.prices[s][t - 1].adj_close, panel.prices[s][t].adj_close, mode);
            }
        }
    }
    return panel;
}

NewsByDay bucket_news(const AlignedPanel& panel, const std::vector<ScoredNews>& scored) {
    NewsByDay out(panel.stocks(), std::vector<std::vector<ScoredNews>>(panel.days()));
    std::map<std::string, std::size_t> index;
    for (std::size_t s = 0; s < panel.stocks(); ++s) index.emplace(panel.symbols[s], s);
    for (const auto& item : scored) {
        auto it = index.find(item.symbol);
        if (it == index.end()) continue;
        const Date d = utc_date(item.published);
        auto pos = std::lower_bound(panel.dates.begin(), panel.dates.end(), d);
        if (pos == panel.dates.end()) continue;
        out[it->second][static_cast<std::size_t>(pos - panel.dates.begin())].push_back(item);
    }
    for (auto& stock : out) {
        for (auto& day : stock) {
            std::stable_sort(day.begin(), day.end(),
                             [](const ScoredNews& a, const ScoredNews& b) { return a.published < b.published; });
        }
    }
    return out;
}

std::vector<MarketWindow> build_windows(const AlignedPanel& panel, const NewsByDay* news, std::size_t lags,
                                        std::size_t max_news) {
    if (lags < 1) throw ConfigError("time lag L must be >= 1");
    if (news && (news->size() != panel.stocks() ||
                 std::any_of(news->begin(), news->end(), [&](const auto& s) { return s.size() != panel.days(); }))) {
        throw ConfigError("news buckets do not match the panel shape");
    }
    std::vector<MarketWindow> windows;
    const std::size_t stocks = panel.stocks();
    for (std::size_t t = lags; t < panel.days(); ++t) {
        bool complete = true;
        for (std::size_t s = 0; s < stocks && complete; ++s) {
            for (std::size_t d = t - lags; d <= t; ++d) {
                if (!panel.available[s][d]) {
                    complete = false;
                    break;
                }
            }
        }
        if (!complete) continue;
        MarketWindow w;
        w.target = panel.dates[t];
        w.target_index = t;
        w.stocks = stocks;
        w.lags = lags;
        w.prices.resize(stocks * lags);
        w.news.resize(stocks * lags);
        w.labels.resize(stocks);
        for (std::size_t s = 0; s < stocks; ++s) {
            w.labels[s] = panel.labels[s][t];
            for (std::size_t k = 0; k < lags; ++k) {
                const std::size_t day = t - (k + 1);
                w.prices[s * lags + k] = panel.prices[s][day].features();
                if (news) {
                    const auto& items = (*news)[s][day];
                    const std::size_t first = items.size() > max_news ? items.size() - max_news : 0;
                    auto& dst = w.news[s * lags + k];
                    for (std::size_t n = first; n < items.size(); ++n) dst.push_back(items[n].score);
                }
            }
        }
        windows.push_back(std::move(w));
    }
    return windows;
}

Splits chronological_split(std::vector<MarketWindow> windows, const SplitDates& dates) {
    if (!(dates.valid_start < dates.test_start)) {
        throw ConfigError("split boundaries overlap: valid_start " + format_date(dates.valid_start) +
                          " must precede test_start " + format_date(dates.test_start));
    }
    Splits out;
    for (auto& w : windows) {
        if (w.target < dates.valid_start) {
            out.train.push_back(std::move(w));
        } else if (w.target < dates.test_start) {
            out.valid.push_back(std::move(w));
        } else {
            out.test.push_back(std::move(w));
        }
    }
    if (out.train.empty()) out.warnings.push_back("training split is empty");
    if (out.valid.empty()) out.warnings.push_back("validation split is empty");
    if (out.test.empty()) out.warnings.push_back("test split is empty");
    return out;
}

std::array<double, kPriceFeatures> Normalizer::apply(const std::array<double, kPriceFeatures>& raw) const {
    std::array<double, kPriceFeatures> out{};
    for (std::size_t k = 0; k < kPriceFeatures; ++k) out[k] = (raw[k] - mean[k]) / stddev[k];
    return out;
}

nlohmann::json Normalizer::to_json() const {
    return {{"mean", mean}, {"stddev", stddev}};
}

Normalizer Normalizer::from_json(const nlohmann::json& j) {
    Normalizer n;
    n.mean = j.at("mean").get<std::array<double, kPriceFeatures>>();
    n.stddev = j.at("stddev").get<std::array<double, kPriceFeatures>>();
    return n;
}

Normalizer fit_normalizer(const AlignedPanel& panel, const Date& valid_start) {
    Normalizer n;
    std::array<double, kPriceFeatures> sum{};
    std::array<double, kPriceFeatures> sq{};
    std::size_t count = 0;
    for (std::size_t s = 0; s < panel.stocks(); ++s) {
        for (std::size_t t = 0; t < panel.days(); ++t) {
            if (!(panel.dates[t] < valid_start) || !panel.available[s][t]) continue;
            const auto f = panel.prices[s][t].features();
            for (std::size_t k = 0; k < kPriceFeatures; ++k) sum[k] += f[k];
            ++count;
        }
    }
    if (count == 0) return n;
    for (std::size_t k = 0; k < kPriceFeatures; ++k) n.mean[k] = sum[k] / static_cast<double>(count);
    for (std::size_t s = 0; s < panel.stocks(); ++s) {
        for (std::size_t t = 0; t < panel.days(); ++t) {
            if (!(panel.dates[t] < valid_start) || !panel.available[s][t]) continue;
            const auto f = panel.prices[s][t].features();
            for (std::size_t k = 0; k < kPriceFeatures; ++k) sq[k] += (f[k] - n.mean[k]) * (f[k] - n.mean[k]);
        }
    }
    for (std::size_t k = 0; k < kPriceFeatures; ++k) {
        const double sd = std::sqrt(sq[k] / static_cast<double>(count));
        n.stddev[k] = sd > 1e-12 ? sd : 1.0;
    }
    return n;
}

}  // namespace causalstock::data
