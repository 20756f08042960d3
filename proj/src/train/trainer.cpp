#include "causalstock/train/trainer.h"

#include "causalstock/numerics/adam.h"
#include "causalstock/train/checkpoint.h"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/format.h>

namespace causalstock::train {

using namespace numerics;

template <typename T>
std::vector<WindowPrediction> predict_windows(const model::Model<T>& m, const std::vector<data::MarketWindow>& windows,
                                              const data::Normalizer& norm, const MatD& graph) {
    std::vector<WindowPrediction> out;
    out.reserve(windows.size());
    for (const auto& w : windows) {
        const auto batch = model::make_batch<T>({&w}, norm, m.config().use_news, m.config().max_news);
        const Mat<T> prob = m.predict(batch, graph);
        WindowPrediction p;
        p.target = w.target;
        p.labels = w.labels;
        p.prob.resize(w.stocks);
        for (std::size_t i = 0; i < w.stocks; ++i) p.prob[i] = static_cast<double>(prob(static_cast<Eigen::Index>(i), 0));
        out.push_back(std::move(p));
    }
    return out;
}

eval::ConfusionCounts confusion(const std::vector<WindowPrediction>& preds) {
    eval::ConfusionCounts c;
    for (const auto& p : preds) {
        std::vector<int> labels(p.labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(p.labels[i]);
        c += eval::confusion(p.prob, labels);
    }
    return c;
}

double temperature(const model::TrainConfig& cfg, int epoch) {
    if (!cfg.anneal) return cfg.tau;
    if (cfg.epochs <= 1 || epoch <= 1) return cfg.tau_start;
    const double f = std::min(1.0, static_cast<double>(epoch - 1) / static_cast<double>(cfg.epochs - 1));
    return cfg.tau_start + (cfg.tau_end - cfg.tau_start) * f;
}

std::string metrics_header() {
    return "epoch,tau,loss,loglik,log_prior,entropy,elbo,bce,batches,skipped,mean_sigma,valid_acc,valid_mcc";
}

std::string metrics_row(const EpochMetrics& e) {
    const auto& l = e.loss;
    std::string valid = e.has_valid ? fmt::format("{:.17g},{:.17g}", e.valid_acc, e.valid_mcc) : std::string(",");
    return fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{},{:.17g},{}", e.epoch, e.tau,
                       l.total, l.loglik, l.log_prior, l.entropy, l.elbo, l.bce, e.batches, e.skipped, e.mean_sigma,
                       valid);
}

namespace {

void accumulate(LossBreakdown& acc, const LossBreakdown& x) {
    acc.loglik += x.loglik;
    acc.log_prior += x.log_prior;
    acc.entropy += x.entropy;
    acc.elbo += x.elbo;
    acc.bce += x.bce;
    acc.total += x.total;
    acc.windows += x.windows;
    acc.labeled += x.labeled;
}

void average(LossBreakdown& acc, std::size_t n) {
    if (n == 0) return;
    const double d = static_cast<double>(n);
    acc.loglik /= d;
    acc.log_prior /= d;
    acc.entropy /= d;
    acc.elbo /= d;
    acc.bce /= d;
    acc.total /= d;
}

}  // namespace

template <typename T>
TrainResult<T> train(model::Model<T>& m, const std::vector<data::MarketWindow>& train_windows,
                     const std::vector<data::MarketWindow>& valid_windows, const model::TrainConfig& cfg,
                     const TrainOptions& opts) {
    if (train_windows.empty()) throw ConfigError("no training windows");
    TrainResult<T> result;
    const auto& mc = m.config();

    Rng master(cfg.seed ^ 0xC0FFEE1234ULL);
    Rng shuffle_rng = master.split();
    Rng noise_rng = master.split();
    Rng probe_rng = master.split();
    Rng infer_rng = master.split();

    Mat<T> prior;
    if (opts.prior) prior = opts.prior->template cast<T>();

    std::vector<const data::MarketWindow*> order(train_windows.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = &train_windows[k];

    const bool write = !opts.out_dir.empty();
    std::ofstream metrics;
    std::ofstream timing;
    if (write) {
        std::filesystem::create_directories(opts.out_dir);
        metrics.open(opts.out_dir / "metrics.csv", std::ios::trunc);
        timing.open(opts.out_dir / "timing.csv", std::ios::trunc);
        if (!metrics || !timing) throw DataError("cannot write metrics in " + opts.out_dir.string());
        metrics << metrics_header() << '\n' << std::flush;
        timing << "epoch,seconds\n" << std::flush;
    }

    const ParamStore<T>* last_finite = nullptr;
    ParamStore<T> snapshot = m.params();
    last_finite = &snapshot;
    auto diverge = [&](const std::string& why, int epoch) {
        if (write) save_checkpoint(opts.out_dir / "last_finite.json", opts.run, opts.symbols, opts.normalizer,
                                   *last_finite, epoch - 1);
        throw NumericError(fmt::format("training diverged in epoch {}: {}", epoch, why));
    };

    auto run_epoch = [&](int epoch, bool update, Rng& noise) {
        EpochMetrics em;
        em.epoch = epoch;
        em.tau = temperature(cfg, std::max(1, epoch));
        LossOptions<T> lo = loss_options<T>(cfg, em.tau);
        lo.prior = opts.prior ? &prior : nullptr;
        const auto start = std::chrono::steady_clock::now();
        for (std::size_t first = 0; first < order.size(); first += cfg.batch_size) {
            const std::size_t last = std::min(order.size(), first + cfg.batch_size);
            std::vector<const data::MarketWindow*> chunk(order.begin() + static_cast<std::ptrdiff_t>(first),
                                                         order.begin() + static_cast<std::ptrdiff_t>(last));
            const auto batch = model::make_batch<T>(chunk, opts.normalizer, mc.use_news, mc.max_news, &opts.symbols);
            if (batch.labeled() == 0) {
                ++em.skipped;
                continue;
            }
            Tape<T> tape(&m.params());
            const auto r = compute_loss(tape, m, batch, lo, noise);
            if (!std::isfinite(r.parts.total)) diverge("loss is not finite", epoch);
            accumulate(em.loss, r.parts);
            ++em.batches;
            if (!update) continue;
            m.params().zero_grad();
            tape.backward(r.total);
            try {
                adam_step(m.params(), AdamConfig{cfg.learning_rate});
            } catch (const NumericError& e) {
                diverge(e.what(), epoch);
            }
        }
        average(em.loss, em.batches);
        if (em.skipped > 0) {
            result.warnings.push_back(fmt::format("epoch {}: skipped {} batch(es) without labels", epoch, em.skipped));
        }
        for (std::size_t k = 0; k < m.params().size(); ++k) {
            if (!m.params().value(k).allFinite()) diverge("parameter '" + m.params().name(k) + "' is not finite", epoch);
        }
        em.mean_sigma = m.sigma().mean();
        if (!valid_windows.empty()) {
            const MatD graph = m.inference_graph(&infer_rng);
            const auto c = confusion(predict_windows(m, valid_windows, opts.normalizer, graph));
            if (c.total() > 0) {
                em.has_valid = true;
                em.valid_acc = eval::accuracy(c);
                em.valid_mcc = eval::mcc(c);
            }
        }
        em.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return em;
    };

    auto record = [&](const EpochMetrics& em) {
        result.history.push_back(em);
        if (write) {
            metrics << metrics_row(em) << '\n' << std::flush;
            timing << fmt::format("{},{:.3f}\n", em.epoch, em.seconds) << std::flush;
        }
        if (opts.on_epoch) opts.on_epoch(em);
    };

    record(run_epoch(0, false, probe_rng));
    result.best = m.params();
    result.best_epoch = 0;
    result.best_valid_acc = result.history.back().valid_acc;
    bool have_best = result.history.back().has_valid;
    int stale = 0;

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        shuffle_rng.shuffle(order.begin(), order.end());
        const EpochMetrics em = run_epoch(epoch, true, noise_rng);
        record(em);
        snapshot = m.params();
        if (write) save_checkpoint(opts.out_dir / "last.json", opts.run, opts.symbols, opts.normalizer, snapshot, epoch);
        if (!em.has_valid) {
            // Without validation data the latest epoch is the best one.
            result.best = snapshot;
            result.best_epoch = epoch;
            continue;
        }
        if (!have_best || em.valid_acc > result.best_valid_acc) {
            have_best = true;
            result.best = snapshot;
            result.best_epoch = epoch;
            result.best_valid_acc = em.valid_acc;
            stale = 0;
            if (write) save_checkpoint(opts.out_dir / "best.json", opts.run, opts.symbols, opts.normalizer, snapshot, epoch);
        } else if (++stale >= cfg.patience) {
            result.early_stopped = true;
            break;
        }
    }
    if (write && (!have_best || result.best_epoch == 0)) {
        save_checkpoint(opts.out_dir / "best.json", opts.run, opts.symbols, opts.normalizer, result.best,
                        result.best_epoch);
    }
    m.load(result.best);
    return result;
}

template std::vector<WindowPrediction> predict_windows(const model::Model<float>&, const std::vector<data::MarketWindow>&,
                                                       const data::Normalizer&, const MatD&);
template std::vector<WindowPrediction> predict_windows(const model::Model<double>&, const std::vector<data::MarketWindow>&,
                                                       const data::Normalizer&, const MatD&);
template TrainResult<float> train(model::Model<float>&, const std::vector<data::MarketWindow>&,
                                  const std::vector<data::MarketWindow>&, const model::TrainConfig&, const TrainOptions&);
template TrainResult<double> train(model::Model<double>&, const std::vector<data::MarketWindow>&,
                                   const std::vector<data::MarketWindow>&, const model::TrainConfig&, const TrainOptions&);

}  // namespace causalstock::train
