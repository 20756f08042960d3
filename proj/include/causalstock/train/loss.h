#pragma once

#include "causalstock/model/model.h"

namespace causalstock::train {

using model::Batch;
using numerics::Mat;
using numerics::Tape;
using numerics::Var;

enum class SampleMode {
    Hard,     // straight-through: forward exactly 0/1, gradient of the relaxed value
    Relaxed,  // relaxed values in the forward pass (gradient checks)
};

template <typename T>
struct LossOptions {
    T tau = T(1);
    T lambda = T(0.01);
    T lambda_s = T(1);
    T lambda_d = T(0);
    const Mat<T>* prior = nullptr;
    SampleMode sample = SampleMode::Hard;
    // Drawn from the generator when null.
    const model::GumbelNoise<T>* noise = nullptr;
    // Constant graph for the news branch instead of the sampled one.
    const Mat<T>* news_graph = nullptr;
};

struct LossBreakdown {
    double loglik = 0.0;     // Gaussian term, averaged over windows
    double log_prior = 0.0;
    double entropy = 0.0;
    double elbo = 0.0;       // loglik + log_prior + entropy
    double bce = 0.0;        // averaged over windows
    double total = 0.0;      // (-elbo + lambda * bce) / D
    std::size_t windows = 0;
    std::size_t labeled = 0;
};

template <typename T>
struct LossResult {
    LossBreakdown parts;
    Var<T> total;
    Var<T> graph;  // sample fed to the price branch
    Var<T> prob;
};

template <typename T>
LossOptions<T> loss_options(const model::TrainConfig& cfg, double tau);

// One graph sample per batch. The prior is evaluated on the same sample as
// the FCM; prior and entropy enter once, the data terms are window means.
// Throws ConfigError when the batch has no labelled entries.
template <typename T>
LossResult<T> compute_loss(Tape<T>& tape, const model::Model<T>& m, const Batch<T>& batch,
                           const LossOptions<T>& opts, numerics::Rng& rng);

extern template LossOptions<float> loss_options(const model::TrainConfig&, double);
extern template LossOptions<double> loss_options(const model::TrainConfig&, double);
extern template LossResult<float> compute_loss(Tape<float>&, const model::Model<float>&, const Batch<float>&,
                                               const LossOptions<float>&, numerics::Rng&);
extern template LossResult<double> compute_loss(Tape<double>&, const model::Model<double>&, const Batch<double>&,
                                                const LossOptions<double>&, numerics::Rng&);

}  // namespace causalstock::train
