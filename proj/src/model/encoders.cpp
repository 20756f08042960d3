#include "causalstock/model/encoders.h"

namespace causalstock::model {

template <typename T>
Encoders<T>::Encoders(ParamStore<T>& store, const ModelConfig& cfg, numerics::Rng& rng)
    : store_(&store), has_news_(cfg.use_news), price_dim_(cfg.price_dim), news_dim_(cfg.news_dim) {
    price_ = numerics::Linear<T>(store, "price_embed", data::kPriceFeatures, cfg.price_dim, rng);
    if (has_news_) {
        news_ = numerics::Linear<T>(store, "news_embed", 5, cfg.news_dim, rng);
        no_news_ = store.add("no_news", numerics::xavier_uniform<T>(1, cfg.news_dim, rng));
    }
}

template <typename T>
Var<T> Encoders<T>::price(Tape<T>& tape, const Mat<T>& prices) const {
    return price_(tape, tape.constant(prices));
}

template <typename T>
Var<T> Encoders<T>::news(Tape<T>& tape, const Mat<T>& items, const std::vector<int>& slot,
                         const Mat<T>& no_news) const {
    if (!has_news_) throw ConfigError("news embedding requested in no-news mode");
    Var<T> fill = numerics::matmul(tape.constant(no_news), tape.param(no_news_));
    if (items.rows() == 0) return fill;
    Var<T> embedded = news_(tape, tape.constant(items));
    return numerics::segment_mean(embedded, slot, no_news.rows()) + fill;
}

template <typename T>
Mat<T> Encoders<T>::assemble(const Batch<T>& batch, std::size_t window) const {
    Tape<T> tape;
    Mat<T> rows_price(static_cast<Eigen::Index>(batch.stocks * batch.lags), data::kPriceFeatures);
    for (std::size_t i = 0; i < batch.stocks; ++i) {
        for (std::size_t k = 0; k < batch.lags; ++k) {
            rows_price.row(static_cast<Eigen::Index>(i * batch.lags + k)) =
                batch.prices.row(static_cast<Eigen::Index>(batch.slot(window, k, i)));
        }
    }
    const Mat<T> p = affine(tape.constant(rows_price), tape.constant(store_->value(price_.weight_id())),
                            tape.constant(store_->value(price_.bias_id())))
                         .value();
    if (!has_news_) return p;

    const Mat<T> all = [&] {
        Tape<T> t(store_);
        return news(t, batch.news, batch.news_slot, batch.no_news).value();
    }();
    Mat<T> out(p.rows(), p.cols() + all.cols());
    for (std::size_t i = 0; i < batch.stocks; ++i) {
        for (std::size_t k = 0; k < batch.lags; ++k) {
            const auto r = static_cast<Eigen::Index>(i * batch.lags + k);
            out.row(r) << p.row(r), all.row(static_cast<Eigen::Index>(batch.slot(window, k, i)));
        }
    }
    return out;
}

template class Encoders<float>;
template class Encoders<double>;

}  // namespace causalstock::model
