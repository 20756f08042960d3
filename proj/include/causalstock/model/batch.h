#pragma once

#include "causalstock/data/panel.h"
#include "causalstock/numerics/tensor.h"

#include <string>
#include <vector>

namespace causalstock::model {

using numerics::Mat;

// Flattened mini-batch. Stock-day rows are ordered (window b, lag k, stock j)
// at index (b * L + k) * D + j; lag k = 0 is day T-1. Output rows are
// stock-major: i * windows + b.
template <typename T>
struct Batch {
    std::size_t windows = 0;
    std::size_t stocks = 0;
    std::size_t lags = 0;
    Mat<T> prices;                // rows x 6, z-scored
    Mat<T> news;                  // items x 5
    std::vector<int> news_slot;   // stock-day row of each item
    Mat<T> no_news;               // rows x 1, 1 where the stock-day has no items
    Mat<T> labels;                // (D * windows) x 1
    Mat<T> mask;                  // 1 for Rise/Fall, 0 for Skip

    std::size_t rows() const { return windows * lags * stocks; }
    std::size_t slot(std::size_t b, std::size_t k, std::size_t j) const { return (b * lags + k) * stocks + j; }
    std::size_t labeled() const;
};

// `symbols` only feeds error messages. Non-finite prices are DataErrors
// naming the stock and day. Each stock-day keeps its `max_news` most recent
// items; `use_news` false leaves the news block empty.
template <typename T>
Batch<T> make_batch(const std::vector<const data::MarketWindow*>& windows, const data::Normalizer& norm,
                    bool use_news, std::size_t max_news, const std::vector<std::string>* symbols = nullptr);

extern template struct Batch<float>;
extern template struct Batch<double>;
extern template Batch<float> make_batch(const std::vector<const data::MarketWindow*>&, const data::Normalizer&, bool,
                                        std::size_t, const std::vector<std::string>*);
extern template Batch<double> make_batch(const std::vector<const data::MarketWindow*>&, const data::Normalizer&,
                                         bool, std::size_t, const std::vector<std::string>*);

}  // namespace causalstock::model
