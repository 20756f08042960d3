#pragma once

#include "causalstock/model/batch.h"
#include "causalstock/model/config.h"
#include "causalstock/numerics/layers.h"

namespace causalstock::model {

using numerics::ParamStore;
using numerics::Tape;
using numerics::Var;

// Price embedding (one affine map 6 -> d_p shared over stocks and lags) and
// news embedding (affine 5 -> d_m per item, mean-pooled per stock-day, with a
// learned vector standing in for days without news).
template <typename T>
class Encoders {
public:
    Encoders(ParamStore<T>& store, const ModelConfig& cfg, numerics::Rng& rng);

    Var<T> price(Tape<T>& tape, const Mat<T>& prices) const;
    // One row per stock-day slot.
    Var<T> news(Tape<T>& tape, const Mat<T>& items, const std::vector<int>& slot, const Mat<T>& no_news) const;

    bool has_news() const { return has_news_; }
    int price_dim() const { return price_dim_; }
    int news_dim() const { return news_dim_; }

    // D x L x (d_p [+ d_m]) for one batch window, flattened to rows
    // stock * L + k where lag k = 0 is day T-1.
    Mat<T> assemble(const Batch<T>& batch, std::size_t window) const;

private:
    numerics::Linear<T> price_;
    numerics::Linear<T> news_;
    typename ParamStore<T>::Id no_news_ = 0;
    ParamStore<T>* store_;
    bool has_news_;
    int price_dim_;
    int news_dim_;
};

extern template class Encoders<float>;
extern template class Encoders<double>;

}  // namespace causalstock::model
