#include "causalstock/train/loss.h"

#include "causalstock/numerics/ops.h"

namespace causalstock::train {

using namespace numerics;

template <typename T>
LossOptions<T> loss_options(const model::TrainConfig& cfg, double tau) {
    LossOptions<T> o;
    o.tau = static_cast<T>(tau);
    o.lambda = static_cast<T>(cfg.lambda);
    o.lambda_s = static_cast<T>(cfg.lambda_s);
    o.lambda_d = static_cast<T>(cfg.lambda_d);
    return o;
}

template <typename T>
LossResult<T> compute_loss(Tape<T>& tape, const model::Model<T>& m, const Batch<T>& batch,
                           const LossOptions<T>& opts, Rng& rng) {
    if (batch.labeled() == 0) throw ConfigError("batch has no labelled stock-days");
    const auto& graph = m.graph();
    const model::EdgeTerms<T> edges = graph.edges(tape);

    model::GumbelNoise<T> drawn;
    const model::GumbelNoise<T>* noise = opts.noise;
    if (!noise) {
        drawn = model::GumbelNoise<T>::draw(edges.sigma.rows(), edges.sigma.cols(), rng);
        noise = &drawn;
    }
    Var<T> relaxed = graph.relaxed(edges, *noise, opts.tau);
    Var<T> sample = opts.sample == SampleMode::Hard ? straight_through(relaxed) : relaxed;

    Var<T> news_graph;
    if (opts.news_graph) {
        news_graph = tape.constant(*opts.news_graph);
    } else {
        news_graph = m.config().detach_news ? stop_gradient(sample) : sample;
    }
    Var<T> ghat = graph.weights(tape);
    const model::FcmOutput<T> out = m.fcm().forward(tape, m.encoders(), batch, sample, news_graph, ghat);

    const T windows = static_cast<T>(batch.windows);
    Var<T> loglik = scale(m.fcm().gaussian_loglik(tape, batch, out.prob), T(1) / windows);
    Var<T> prior = model::log_prior(sample, opts.lambda_s, opts.lambda_d, opts.prior);
    Var<T> entropy = model::posterior_entropy(edges);
    Var<T> elbo = loglik + prior + entropy;

    Var<T> labels = tape.constant(batch.labels);
    Var<T> mask = tape.constant(batch.mask);
    Var<T> log_p = log(out.prob);
    Var<T> log_q = log(sigmoid(-out.logits));
    Var<T> fit = labels * log_p + add_scalar(-labels, T(1)) * log_q;
    Var<T> bce = scale(sum(fit * mask), T(-1) / windows);

    const T stocks = static_cast<T>(batch.stocks);
    Var<T> total = scale(-elbo + scale(bce, opts.lambda), T(1) / stocks);

    LossResult<T> r;
    r.total = total;
    r.graph = sample;
    r.prob = out.prob;
    r.parts.loglik = static_cast<double>(loglik.scalar());
    r.parts.log_prior = static_cast<double>(prior.scalar());
    r.parts.entropy = static_cast<double>(entropy.scalar());
    r.parts.elbo = static_cast<double>(elbo.scalar());
    r.parts.bce = static_cast<double>(bce.scalar());
    r.parts.total = static_cast<double>(total.scalar());
    r.parts.windows = batch.windows;
    r.parts.labeled = batch.labeled();
    return r;
}

template LossOptions<float> loss_options(const model::TrainConfig&, double);
template LossOptions<double> loss_options(const model::TrainConfig&, double);
template LossResult<float> compute_loss(Tape<float>&, const model::Model<float>&, const Batch<float>&,
                                        const LossOptions<float>&, Rng&);
template LossResult<double> compute_loss(Tape<double>&, const model::Model<double>&, const Batch<double>&,
                                         const LossOptions<double>&, Rng&);

}  // namespace causalstock::train
