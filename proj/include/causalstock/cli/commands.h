#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace causalstock::cli {

namespace fs = std::filesystem;

// Written as run_manifest.json next to the outputs of every command that
// produces artifacts. Only `created_at` differs between identical reruns.
struct RunManifest {
    std::string command;
    nlohmann::json config = nlohmann::json::object();
    std::uint64_t seed = 0;
    std::vector<fs::path> inputs;
    std::vector<fs::path> outputs;
};

// SHA-256 per file; directories are walked in sorted order.
nlohmann::json digest_inputs(const std::vector<fs::path>& paths);
void write_run_manifest(const fs::path& dir, const RunManifest& m);

struct IngestArgs {
    fs::path manifest;
    fs::path out;
    std::size_t lags = 5;
    std::size_t max_news = 10;
    bool news = true;
};
void ingest(const IngestArgs& a);

struct ScoreNewsArgs {
    fs::path manifest;
    fs::path cache;  // defaults to the manifest's `scores`
    bool offline = false;
    int concurrency = 4;
    double requests_per_second = 5.0;
};
void score_news(const ScoreNewsArgs& a);

struct TrainArgs {
    fs::path config;  // optional key = value file
    fs::path data;
    fs::path out;
    std::vector<std::string> overrides;  // key=value
    bool no_news = false;
    bool lag_independent = false;
    bool existence_only = false;
    bool quiet = false;
};
void train(const TrainArgs& a);

struct DiscoverArgs {
    fs::path checkpoint;
    fs::path out;
    std::uint64_t seed = 1;  // for the exported hard sample
};
void discover(const DiscoverArgs& a);

struct PredictArgs {
    fs::path checkpoint;
    fs::path data;
    fs::path out;  // CSV file
    std::string split = "test";  // train | valid | test | all
};
void predict(const PredictArgs& a);

struct BacktestArgs {
    fs::path predictions;
    fs::path prices;  // price directory, or a dataset manifest / directory
    fs::path out;
    std::size_t k = 3;
    double risk_free = 0.0;
    double cost = 0.0;
};
void backtest(const BacktestArgs& a);

struct SynthArgs {
    std::size_t stocks = 8;
    std::size_t lags = 2;
    double density = 0.15;
    std::string link = "linear";
    std::size_t steps = 2000;
    std::uint64_t seed = 1;
    bool news = false;
    bool zero_weights = false;
    fs::path out;
};
void synth_data(const SynthArgs& a);

struct SynthBenchArgs {
    SynthArgs system;
    int trials = 5;
    int permutations = 1000;
    std::vector<std::string> overrides;
    bool quiet = false;
};
// Returns false when the recovery target is missed (mean AUROC < 0.85 or a
// trial at or below its shuffled baseline).
bool synth_bench(const SynthBenchArgs& a);

struct StrengthArgs {
    fs::path graph;  // graph.json from discover
    fs::path market_values;
    fs::path out;
    std::size_t shuffles = 10000;
    std::uint64_t seed = 1;
};
void strength(const StrengthArgs& a);

struct AuditArgs {
    std::uint64_t seed = 1;
    double step = 1e-5;
    double tolerance = 1e-4;
    bool detach = false;
};
// Gradient check of the full loss on a small synthetic model. Returns pass.
bool audit(const AuditArgs& a);

}  // namespace causalstock::cli
