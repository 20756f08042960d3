#pragma once

#include "causalstock/data/panel.h"
#include "causalstock/eval/metrics.h"
#include "causalstock/model/model.h"
#include "causalstock/train/loss.h"

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace causalstock::train {

struct WindowPrediction {
    data::Date target;
    std::vector<double> prob;              // per stock
    std::vector<data::Movement> labels;    // per stock
};

// Each window is evaluated on its own, so results never depend on how
// windows are grouped.
template <typename T>
std::vector<WindowPrediction> predict_windows(const model::Model<T>& m, const std::vector<data::MarketWindow>& windows,
                                              const data::Normalizer& norm, const numerics::MatD& graph);

eval::ConfusionCounts confusion(const std::vector<WindowPrediction>& preds);

struct EpochMetrics {
    int epoch = 0;  // 0 is the untrained model
    double tau = 1.0;
    LossBreakdown loss;      // means over batches
    std::size_t batches = 0;
    std::size_t skipped = 0;  // batches without any labelled stock-day
    double mean_sigma = 0.0;
    double valid_acc = 0.0;
    double valid_mcc = 0.0;
    bool has_valid = false;
    double seconds = 0.0;    // wall clock; kept out of metrics.csv
};

struct TrainOptions {
    std::filesystem::path out_dir;  // metrics.csv, timing.csv, best.json, last.json; empty writes nothing
    std::vector<std::string> symbols;
    data::Normalizer normalizer;
    model::RunConfig run;           // stored in checkpoints
    const numerics::MatD* prior = nullptr;
    std::function<void(const EpochMetrics&)> on_epoch;
};

template <typename T>
struct TrainResult {
    std::vector<EpochMetrics> history;
    int best_epoch = 0;
    double best_valid_acc = 0.0;
    bool early_stopped = false;
    numerics::ParamStore<T> best;
    std::vector<std::string> warnings;
};

// Adam over seeded shuffled mini-batches with validation ACC/MCC per epoch,
// best-validation checkpointing and early stopping. A non-finite loss or
// gradient writes the last finite epoch to `last_finite.json` and throws
// NumericError. The model ends holding the best parameters.
template <typename T>
TrainResult<T> train(model::Model<T>& m, const std::vector<data::MarketWindow>& train_windows,
                     const std::vector<data::MarketWindow>& valid_windows, const model::TrainConfig& cfg,
                     const TrainOptions& opts);

std::string metrics_header();
std::string metrics_row(const EpochMetrics& e);

double temperature(const model::TrainConfig& cfg, int epoch);

}  // namespace causalstock::train
