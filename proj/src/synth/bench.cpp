#include "causalstock/synth/bench.h"

#include "causalstock/data/panel.h"
#include "causalstock/numerics/rng.h"

#include <algorithm>
#include <fstream>
#include <numeric>

#include <fmt/format.h>

namespace causalstock::synth {

model::RunConfig BenchConfig::bench_run_config() {
    model::RunConfig r;
    r.model.hidden = 32;
    r.model.branch_width = 8;
    r.model.use_news = false;
    r.train.learning_rate = 3e-3;
    r.train.lambda_s = 0.03;
    r.train.epochs = 60;
    r.train.patience = 60;
    r.train.batch_size = 32;
    return r;
}

double BenchResult::mean_auroc() const {
    if (trials.empty()) return 0.0;
    double s = 0.0;
    for (const auto& t : trials) s += t.recovery.auroc;
    return s / static_cast<double>(trials.size());
}

double shuffled_auroc_p95(const MatD& sigma, const MatD& truth, int permutations, std::uint64_t seed) {
    numerics::Rng rng(seed);
    MatD shuffled = sigma;
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(permutations));
    for (int p = 0; p < permutations; ++p) {
        rng.shuffle(shuffled.data(), shuffled.data() + shuffled.size());
        values.push_back(auroc(shuffled, truth));
    }
    std::sort(values.begin(), values.end());
    const auto k = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(values.size()))) - 1;
    return values[std::min(k, values.size() - 1)];
}

BenchResult run_bench(const BenchConfig& cfg, const std::filesystem::path& out_dir,
                      const std::function<void(const TrialResult&)>& on_trial) {
    BenchResult result;
    std::ofstream summary;
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        summary.open(out_dir / "synth_bench.csv", std::ios::trunc);
        if (!summary) throw DataError("cannot write " + (out_dir / "synth_bench.csv").string());
        summary << bench_header() << '\n' << std::flush;
    }
    for (int trial = 0; trial < cfg.trials; ++trial) {
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(trial);
        GroundTruthSystem sys = cfg.zero_weights ? zero_system(cfg.stocks, cfg.lags, seed)
                                                 : generate_system(cfg.stocks, cfg.lags, cfg.density, cfg.link, seed);
        SimulateOptions so;
        so.steps = cfg.steps;
        so.news = cfg.news;
        const SimulatedMarket market = simulate(sys, so);

        model::RunConfig run = cfg.run;
        run.model.stocks = cfg.stocks;
        run.model.lags = cfg.lags;
        run.model.use_news = cfg.news;
        run.train.seed = seed;

        const data::AlignedPanel panel = data::align(market.prices, data::CalendarPolicy::Intersection,
                                                     data::LabelMode::strict());
        const data::NewsByDay buckets = data::bucket_news(panel, market.scored);
        auto windows = data::build_windows(panel, cfg.news ? &buckets : nullptr, cfg.lags, run.model.max_news);
        const std::size_t n = panel.days();
        const data::SplitDates dates{panel.dates[n * 70 / 100], panel.dates[n * 85 / 100]};
        const data::Splits splits = data::chronological_split(std::move(windows), dates);

        train::TrainOptions opts;
        opts.symbols = market.symbols;
        opts.normalizer = data::fit_normalizer(panel, dates.valid_start);
        opts.run = run;
        if (!out_dir.empty()) opts.out_dir = out_dir / fmt::format("trial_{}", trial);

        model::Model<float> m(run.model, seed);
        const auto tr = train::train(m, splits.train, splits.valid, run.train, opts);

        TrialResult t;
        t.trial = trial;
        t.seed = seed;
        t.edges = sys.edge_count();
        t.stability = sys.stability;
        const MatD sigma = m.sigma();
        if (!cfg.zero_weights) {
            t.recovery = recovery_score(sigma, sys.graph);
            t.baseline_p95 = shuffled_auroc_p95(sigma, sys.graph, cfg.permutations, seed ^ 0xBA5E11AEULL);
        }
        t.initial_loss = tr.history.front().loss.total;
        t.final_loss = tr.history.back().loss.total;
        t.min_loss = t.initial_loss;
        for (const auto& e : tr.history) t.min_loss = std::min(t.min_loss, e.loss.total);
        t.epochs_run = tr.history.back().epoch;
        t.best_epoch = tr.best_epoch;
        t.best_valid_acc = tr.best_valid_acc;
        if (!splits.test.empty()) {
            const auto c = train::confusion(train::predict_windows(m, splits.test, opts.normalizer, m.inference_graph()));
            t.test_acc = eval::accuracy(c);
            t.test_mcc = eval::mcc(c);
        }
        if (summary.is_open()) summary << bench_row(t) << '\n' << std::flush;
        if (on_trial) on_trial(t);
        result.trials.push_back(t);
    }
    return result;
}

std::string bench_header() {
    return "trial,seed,edges,stability,auroc,f1,shd,baseline_p95,initial_loss,final_loss,min_loss,epochs,best_epoch,"
           "best_valid_acc,test_acc,test_mcc";
}

std::string bench_row(const TrialResult& t) {
    return fmt::format("{},{},{},{:.17g},{:.17g},{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g},{},{},{:.17g},{:.17g},{:.17g}",
                       t.trial, t.seed, t.edges, t.stability, t.recovery.auroc, t.recovery.f1, t.recovery.shd,
                       t.baseline_p95, t.initial_loss, t.final_loss, t.min_loss, t.epochs_run, t.best_epoch,
                       t.best_valid_acc, t.test_acc, t.test_mcc);
}

}  // namespace causalstock::synth
