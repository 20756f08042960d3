#pragma once

#include "causalstock/model/batch.h"
#include "causalstock/model/config.h"
#include "causalstock/model/encoders.h"
#include "causalstock/numerics/layers.h"

#include <vector>

namespace causalstock::model {

template <typename T>
struct FcmOutput {
    Var<T> logits;  // (D * windows) x 1, stock-major
    Var<T> prob;    // sigmoid(logits)
};

// Head logits are clamped here so the sigmoid output stays strictly inside
// (0, 1) in single precision.
inline constexpr double kHeadLogitClamp = 15.0;

// Additive-noise functional causal model: parents (graph x weight) feed the
// shared ell (price) and psi (news) networks, and the per-stock heads zeta_i
// map the aggregated parent information to a movement probability.
template <typename T>
class Fcm {
public:
    Fcm(ParamStore<T>& store, const ModelConfig& cfg, numerics::Rng& rng);

    // `price_graph` and `news_graph` are (L * D) x D edge values; the caller
    // decides whether the news one is detached. `news_graph` is ignored in
    // no-news mode.
    FcmOutput<T> forward(Tape<T>& tape, const Encoders<T>& enc, const Batch<T>& batch, const Var<T>& price_graph,
                         const Var<T>& news_graph, const Var<T>& ghat) const;

    // sum over labelled stocks of -0.5 ln(2 pi s2_i) - z_i^2 / (2 s2_i) with z = g - y_hat.
    Var<T> gaussian_loglik(Tape<T>& tape, const Batch<T>& batch, const Var<T>& prob) const;

    typename ParamStore<T>::Id log_var_id() const { return log_var_; }

private:
    Var<T> heads(Tape<T>& tape, const Var<T>& s, std::size_t windows) const;

    std::size_t stocks_;
    bool use_news_;
    bool shared_heads_;
    numerics::Mlp<T> ell_;
    numerics::Mlp<T> psi_;
    std::vector<numerics::Mlp<T>> heads_;
    numerics::Mlp<T> trunk_;
    std::vector<numerics::Linear<T>> finals_;
    typename ParamStore<T>::Id log_var_ = 0;
};

// Plain-value residual and likelihood for reporting and tests.
std::vector<double> residual_noise(const std::vector<double>& labels, const std::vector<double>& prob);
double gaussian_loglik_value(const std::vector<double>& z, const std::vector<double>& log_var,
                             const std::vector<bool>& mask);

extern template class Fcm<float>;
extern template class Fcm<double>;

}  // namespace causalstock::model
