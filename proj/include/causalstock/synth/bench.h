#pragma once

#include "causalstock/model/config.h"
#include "causalstock/synth/system.h"
#include "causalstock/train/trainer.h"

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace causalstock::synth {

struct BenchConfig {
    std::size_t stocks = 8;
    std::size_t lags = 2;
    double density = 0.15;
    Link link = Link::Linear;
    std::size_t steps = 2000;
    int trials = 5;
    std::uint64_t seed = 1;
    bool news = false;
    bool zero_weights = false;  // control system without signal
    int permutations = 1000;    // shuffled-Sigma baseline draws
    model::RunConfig run = bench_run_config();

    // Smaller networks and a larger step size than the full-data defaults so
    // a trial trains in well under a CPU minute.
    static model::RunConfig bench_run_config();
};

struct TrialResult {
    int trial = 0;
    std::uint64_t seed = 0;
    std::size_t edges = 0;
    double stability = 1.0;
    Recovery recovery;
    double baseline_p95 = 0.0;  // 95th percentile AUROC of shuffled Sigma
    double initial_loss = 0.0;
    double final_loss = 0.0;    // last epoch
    double min_loss = 0.0;
    int epochs_run = 0;
    int best_epoch = 0;
    double best_valid_acc = 0.0;
    double test_acc = 0.0;
    double test_mcc = 0.0;

    bool beats_baseline() const { return recovery.auroc > baseline_p95; }
};

struct BenchResult {
    std::vector<TrialResult> trials;
    double mean_auroc() const;
};

double shuffled_auroc_p95(const MatD& sigma, const MatD& truth, int permutations, std::uint64_t seed);

// Generate -> simulate -> align/window/split through the data pipeline ->
// train -> score recovery, once per trial with seed `seed + trial`.
// `out_dir` (optional) receives per-trial metrics and a summary CSV.
BenchResult run_bench(const BenchConfig& cfg, const std::filesystem::path& out_dir = {},
                      const std::function<void(const TrialResult&)>& on_trial = {});

std::string bench_header();
std::string bench_row(const TrialResult& t);

}  // namespace causalstock::synth
