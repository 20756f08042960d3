#pragma once

#include "causalstock/data/news_items.h"
#include "causalstock/data/prices.h"
#include "causalstock/news/cache.h"
#include "causalstock/numerics/tensor.h"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace causalstock::synth {

using numerics::MatD;

enum class Link { Linear, Tanh };

// Lagged structural system x_t^i = link(sum_{l,j} G_{l,ji} W_{l,ji} x_{t-l}^j) + e.
// Graph tensors use the (L * D) x D layout of the model.
struct GroundTruthSystem {
    std::size_t stocks = 0;
    std::size_t lags = 0;
    double density = 0.0;
    Link link = Link::Linear;
    std::uint64_t seed = 0;
    MatD graph;    // 0/1
    MatD weights;  // |w| in [0.5, 1.5] on edges, 0 elsewhere
    std::vector<double> noise_scale;
    // Lag-l weights are multiplied by stability^l when simulating; 1 unless
    // the linear system had spectral radius >= 1.
    double stability = 1.0;

    std::size_t edge_count() const;
    // Weights actually used by the simulator.
    MatD effective_weights() const;
};

// Edges i.i.d. Bernoulli(density) over all lags (self-lags included); a
// stock left without parents gets one random incoming edge.
GroundTruthSystem generate_system(std::size_t stocks, std::size_t lags, double density, Link link,
                                  std::uint64_t seed, double noise_scale = 1.0);

// Zero weights everywhere: labels carry no signal.
GroundTruthSystem zero_system(std::size_t stocks, std::size_t lags, std::uint64_t seed);

// Spectral radius of the companion matrix of the effective linear system.
double spectral_radius(const GroundTruthSystem& sys);

struct SimulatedMarket {
    std::vector<std::string> symbols;
    std::vector<data::PriceSeries> prices;
    MatD latent;  // steps x D after burn-in
    std::vector<data::NewsItem> news;
    std::vector<data::ScoredNews> scored;
};

struct SimulateOptions {
    std::size_t steps = 2000;
    bool news = false;          // one item per stock-day with sentiment tied to the next move
    double news_noise = 0.3;
    double news_coverage = 1.0;  // chance that a stock-day carries an item
    double price_scale = 0.01;  // log-return per unit of latent x
};

// Deterministic given the system seed. Latent x maps to prices through
// adj_t = adj_{t-1} exp(price_scale * x_t), so the movement label of day t
// is the sign of x_t; volume is exp-linear in x_t.
SimulatedMarket simulate(const GroundTruthSystem& sys, const SimulateOptions& opts);

struct Recovery {
    double auroc = 0.0;
    double f1 = 0.0;
    std::size_t shd = 0;
};

// Throws ConfigError when the true graph is all zeros or all ones.
double auroc(const MatD& scores, const MatD& truth);
Recovery recovery_score(const MatD& sigma, const MatD& truth);

nlohmann::json to_json(const GroundTruthSystem& sys);
GroundTruthSystem system_from_json(const nlohmann::json& j);

// Writes prices/<SYM>.csv, manifest.txt, ground_truth.json and, with news,
// news.jsonl plus a matching score cache. Splits at 70% and 85% of the days.
void write_dataset(const std::filesystem::path& dir, const GroundTruthSystem& sys, const SimulatedMarket& market);

}  // namespace causalstock::synth
