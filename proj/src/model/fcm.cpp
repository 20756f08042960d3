#include "causalstock/model/fcm.h"

#include "causalstock/numerics/ops.h"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace causalstock::model {

using namespace numerics;

namespace {

template <typename T>
void check_rows(const Mat<T>& m, const Batch<T>& b, const char* what) {
    if (m.allFinite()) return;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (m.row(r).allFinite()) continue;
        const auto row = static_cast<std::size_t>(r);
        const std::size_t j = row % b.stocks;
        const std::size_t k = (row / b.stocks) % b.lags;
        throw NumericError(fmt::format("non-finite {} output for stock {} at lag {}", what, j, k + 1));
    }
}

}  // namespace

template <typename T>
Fcm<T>::Fcm(ParamStore<T>& store, const ModelConfig& cfg, Rng& rng)
    : stocks_(cfg.stocks), use_news_(cfg.use_news), shared_heads_(cfg.shared_heads) {
    ell_ = Mlp<T>(store, "ell", cfg.price_dim, cfg.hidden, cfg.branch_width, cfg.depth, rng);
    if (use_news_) psi_ = Mlp<T>(store, "psi", cfg.news_dim, cfg.hidden, cfg.branch_width, cfg.depth, rng);
    const Eigen::Index in = cfg.branch_width * (use_news_ ? 2 : 1);
    if (shared_heads_) {
        Eigen::Index width = in;
        if (cfg.depth > 1) {
            trunk_ = Mlp<T>(store, "zeta.trunk", in, cfg.hidden, cfg.hidden, cfg.depth - 1, rng);
            width = cfg.hidden;
        }
        for (std::size_t i = 0; i < stocks_; ++i) {
            finals_.emplace_back(store, fmt::format("zeta{}.out", i), width, 1, rng);
        }
    } else {
        for (std::size_t i = 0; i < stocks_; ++i) {
            heads_.emplace_back(store, fmt::format("zeta{}", i), in, cfg.hidden, 1, cfg.depth, rng);
        }
    }
    log_var_ = store.add("noise.log_var", Mat<T>::Zero(static_cast<Eigen::Index>(stocks_), 1));
}

template <typename T>
Var<T> Fcm<T>::heads(Tape<T>& tape, const Var<T>& s, std::size_t windows) const {
    const auto b = static_cast<Eigen::Index>(windows);
    Var<T> shared = s;
    if (shared_heads_ && !trunk_.layers().empty()) shared = tanh(trunk_(tape, s));
    std::vector<Var<T>> out;
    out.reserve(stocks_);
    for (std::size_t i = 0; i < stocks_; ++i) {
        Var<T> rows = slice_rows(shared, static_cast<Eigen::Index>(i) * b, b);
        out.push_back(shared_heads_ ? finals_[i](tape, rows) : heads_[i](tape, rows));
    }
    return concat_rows(out);
}

template <typename T>
FcmOutput<T> Fcm<T>::forward(Tape<T>& tape, const Encoders<T>& enc, const Batch<T>& batch,
                             const Var<T>& price_graph, const Var<T>& news_graph, const Var<T>& ghat) const {
    if (batch.stocks != stocks_) {
        throw ConfigError(fmt::format("batch has {} stocks, model expects {}", batch.stocks, stocks_));
    }
    const auto windows = static_cast<Eigen::Index>(batch.windows);
    Var<T> price_features = ell_(tape, enc.price(tape, batch.prices));
    check_rows(price_features.value(), batch, "price branch");
    Var<T> s = graph_aggregate(price_graph * ghat, price_features, windows);
    if (use_news_) {
        Var<T> news_features = psi_(tape, enc.news(tape, batch.news, batch.news_slot, batch.no_news));
        check_rows(news_features.value(), batch, "news branch");
        s = concat_cols<T>({s, graph_aggregate(news_graph * ghat, news_features, windows)});
    }
    FcmOutput<T> out;
    const T c = static_cast<T>(kHeadLogitClamp);
    out.logits = clamp(heads(tape, s, batch.windows), -c, c);
    if (!out.logits.value().allFinite()) {
        for (Eigen::Index r = 0; r < out.logits.rows(); ++r) {
            if (!std::isfinite(out.logits.value()(r, 0))) {
                throw NumericError(fmt::format("non-finite head output for stock {}", r / windows));
            }
        }
    }
    out.prob = sigmoid(out.logits);
    return out;
}

template <typename T>
Var<T> Fcm<T>::gaussian_loglik(Tape<T>& tape, const Batch<T>& batch, const Var<T>& prob) const {
    const auto d = static_cast<Eigen::Index>(stocks_);
    const auto windows = static_cast<Eigen::Index>(batch.windows);
    Mat<T> select = Mat<T>::Zero(d * windows, d);
    for (Eigen::Index i = 0; i < d; ++i) select.block(i * windows, i, windows, 1).setOnes();
    Var<T> log_var = matmul(tape.constant(std::move(select)), tape.param(log_var_));
    Var<T> mask = tape.constant(batch.mask);
    Var<T> z = tape.constant(batch.labels) - prob;
    const T half_log_2pi = static_cast<T>(0.5 * std::log(2.0 * std::numbers::pi));
    Var<T> per_row = add_scalar(scale(log_var, T(-0.5)), -half_log_2pi) - scale(z * z * exp(-log_var), T(0.5));
    return sum(per_row * mask);
}

std::vector<double> residual_noise(const std::vector<double>& labels, const std::vector<double>& prob) {
    if (labels.size() != prob.size()) throw ConfigError("residual_noise: length mismatch");
    std::vector<double> z(labels.size());
    for (std::size_t k = 0; k < z.size(); ++k) z[k] = labels[k] - prob[k];
    return z;
}

double gaussian_loglik_value(const std::vector<double>& z, const std::vector<double>& log_var,
                             const std::vector<bool>& mask) {
    if (z.size() != log_var.size() || z.size() != mask.size()) throw ConfigError("gaussian_loglik: length mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!mask[i]) continue;
        total += -0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * log_var[i] - z[i] * z[i] / (2.0 * std::exp(log_var[i]));
    }
    return total;
}

template class Fcm<float>;
template class Fcm<double>;

}  // namespace causalstock::model
