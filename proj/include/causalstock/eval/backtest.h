#pragma once

#include "causalstock/data/date.h"
#include "causalstock/data/prices.h"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace causalstock::eval {

// One row of a prediction dump: the probability that `symbol` rises on `date`.
struct PredictionRow {
    data::Date date;
    std::string symbol;
    double probability = 0.0;
    int label = -1;  // 1 rise, 0 fall, -1 unknown / skipped
};

void write_predictions(const std::filesystem::path& path, const std::vector<PredictionRow>& rows);
std::vector<PredictionRow> load_predictions(const std::filesystem::path& path);

struct BacktestResult {
    std::vector<data::Date> dates;
    std::vector<double> returns;  // daily portfolio return
    std::vector<double> apv;      // running product of (1 + r)
    std::vector<std::vector<std::string>> holdings;
    double final_apv = 1.0;
    double sharpe_apv = 0.0;      // on the APV series
    double sharpe_daily = 0.0;    // on daily returns, for comparison
    double risk_free = 0.0;
    std::vector<std::string> log;
};

std::vector<double> accumulate_apv(const std::vector<double>& returns);

// mean(x - rf) / std(x - rf), sample standard deviation. Fewer than two
// points or zero variance is a ConfigError.
double sharpe(const std::vector<double>& series, double risk_free);

struct BacktestOptions {
    std::size_t k = 3;
    double risk_free = 0.0;
    double cost_per_turnover = 0.0;  // charged on sum |w_t - w_{t-1}|
};

// For each prediction date T, buys the k most probable stocks equal-weight
// at the close of the previous trading day and realizes adj_T / adj_{T-1} - 1.
// Ties go to the lexicographically smaller symbol. Days with fewer than k
// priced stocks use all of them and are logged.
BacktestResult backtest(const std::vector<PredictionRow>& predictions,
                        const std::map<std::string, data::PriceSeries>& prices, const BacktestOptions& opts);

}  // namespace causalstock::eval
