#pragma once

#include "causalstock/data/text.h"

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace causalstock::model {

enum class GraphMode {
    LagDependent,    // u'_l = h_u(u_l, u_{l-1}) for l >= 2
    LagIndependent,  // u' = u
    ExistenceOnly,   // sigma = logistic(u'), V unused
};

// Which graph the FCM sees at prediction time.
enum class InferenceGraph {
    Map,     // Sigma > 0.5
    Mean,    // Sigma itself
    Sample,  // one seeded Gumbel draw
};

enum class Precision { F32, F64 };

struct ModelConfig {
    std::size_t stocks = 0;  // D, taken from the dataset
    std::size_t lags = 5;    // L
    int price_dim = 4;       // d_p
    int news_dim = 64;       // d_m
    std::size_t max_news = 10;  // l_max
    int depth = 3;           // affine layers in each of zeta, ell, psi
    int hidden = 332;
    int branch_width = 16;   // output width of ell and psi
    int graph_depth = 1;     // layers in h_u / h_v
    int graph_hidden = 8;
    bool use_news = true;
    bool detach_news = true;
    bool shared_heads = false;  // hidden layers of zeta shared, last layer per stock
    GraphMode graph_mode = GraphMode::LagDependent;
    InferenceGraph inference = InferenceGraph::Map;
};

struct TrainConfig {
    double learning_rate = 1e-5;
    std::size_t batch_size = 32;
    double lambda = 0.01;    // BCE weight
    double lambda_s = 1.0;   // sparsity
    double lambda_d = 0.0;   // domain prior
    std::string prior_graph;  // optional G_p file
    int epochs = 100;
    int patience = 10;
    std::uint64_t seed = 1;
    double tau = 1.0;
    bool anneal = false;      // linear tau_start -> tau_end over the epochs
    double tau_start = 2.0;
    double tau_end = 0.5;
    Precision precision = Precision::F32;
};

struct RunConfig {
    ModelConfig model;
    TrainConfig train;
};

const std::vector<std::string>& config_keys();

// Reads every known key; unknown keys are ConfigErrors.
RunConfig config_from_file(const data::KeyValueFile& file);
// Applies `key=value` overrides on top of an existing configuration.
void apply_overrides(RunConfig& cfg, const data::KeyValueFile& overrides);
data::KeyValueFile config_to_file(const RunConfig& cfg);
// Positive sizes, rates and temperatures.
void validate(const RunConfig& cfg);

nlohmann::json to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const nlohmann::json& j);

std::string to_string(GraphMode m);
std::string to_string(InferenceGraph m);
std::string to_string(Precision p);

}  // namespace causalstock::model
