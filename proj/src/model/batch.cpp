#include "causalstock/model/batch.h"

#include "causalstock/error.h"

#include <cmath>

#include <fmt/format.h>

namespace causalstock::model {

template <typename T>
std::size_t Batch<T>::labeled() const {
    std::size_t n = 0;
    for (Eigen::Index r = 0; r < mask.rows(); ++r) n += mask(r, 0) > T(0.5) ? 1 : 0;
    return n;
}

template <typename T>
Batch<T> make_batch(const std::vector<const data::MarketWindow*>& windows, const data::Normalizer& norm,
                    bool use_news, std::size_t max_news, const std::vector<std::string>* symbols) {
    if (windows.empty()) throw ConfigError("cannot build an empty batch");
    Batch<T> b;
    b.windows = windows.size();
    b.stocks = windows.front()->stocks;
    b.lags = windows.front()->lags;
    const auto rows = static_cast<Eigen::Index>(b.rows());
    b.prices.resize(rows, data::kPriceFeatures);
    b.no_news = Mat<T>::Zero(rows, 1);
    b.labels = Mat<T>::Zero(static_cast<Eigen::Index>(b.stocks * b.windows), 1);
    b.mask = Mat<T>::Zero(b.labels.rows(), 1);

    std::size_t items = 0;
    for (const auto* w : windows) {
        if (w->stocks != b.stocks || w->lags != b.lags) throw ConfigError("windows in one batch differ in shape");
        if (!use_news) continue;
        for (const auto& day : w->news) items += std::min(day.size(), max_news);
    }
    b.news.resize(static_cast<Eigen::Index>(items), 5);
    b.news_slot.reserve(items);

    Eigen::Index item = 0;
    for (std::size_t wi = 0; wi < windows.size(); ++wi) {
        const auto& w = *windows[wi];
        for (std::size_t k = 0; k < b.lags; ++k) {
            for (std::size_t j = 0; j < b.stocks; ++j) {
                const auto r = static_cast<Eigen::Index>(b.slot(wi, k, j));
                const auto& raw = w.price(j, k);
                const auto z = norm.apply(raw);
                for (std::size_t f = 0; f < data::kPriceFeatures; ++f) {
                    if (!std::isfinite(z[f])) {
                        const std::string name = symbols ? (*symbols)[j] : fmt::format("stock {}", j);
                        throw DataError(fmt::format("non-finite price feature {} for {} at lag {} of the window "
                                                    "targeting {}",
                                                    f, name, k + 1, data::format_date(w.target)));
                    }
                    b.prices(r, static_cast<Eigen::Index>(f)) = static_cast<T>(z[f]);
                }
                const auto& day = w.news_at(j, k);
                const std::size_t take = use_news ? std::min(day.size(), max_news) : 0;
                if (take == 0) b.no_news(r, 0) = T(1);
                for (std::size_t n = day.size() - take; n < day.size(); ++n) {
                    const auto s = day[n].as_array();
                    for (int c = 0; c < 5; ++c) b.news(item, c) = static_cast<T>(s[static_cast<std::size_t>(c)]);
                    b.news_slot.push_back(static_cast<int>(r));
                    ++item;
                }
            }
        }
        for (std::size_t i = 0; i < b.stocks; ++i) {
            const auto r = static_cast<Eigen::Index>(i * b.windows + wi);
            const auto label = w.labels[i];
            if (label == data::Movement::Skip) continue;
            b.labels(r, 0) = label == data::Movement::Rise ? T(1) : T(0);
            b.mask(r, 0) = T(1);
        }
    }
    return b;
}

template struct Batch<float>;
template struct Batch<double>;
template Batch<float> make_batch(const std::vector<const data::MarketWindow*>&, const data::Normalizer&, bool,
                                 std::size_t, const std::vector<std::string>*);
template Batch<double> make_batch(const std::vector<const data::MarketWindow*>&, const data::Normalizer&, bool,
                                  std::size_t, const std::vector<std::string>*);

}  // namespace causalstock::model
