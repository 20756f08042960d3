#pragma once

#include "causalstock/model/config.h"
#include "causalstock/numerics/layers.h"

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace causalstock::model {

using numerics::Mat;
using numerics::ParamStore;
using numerics::Tape;
using numerics::Var;

// L x D x D graph tensors are stored as (L * D) x D matrices: row l * D + j,
// column i holds the edge from stock j at lag l + 1 to stock i.

// Edge logits are clamped to this magnitude so sigma stays inside
// (1e-13, 1 - 1e-13).
inline constexpr double kLogitClamp = 29.0;

template <typename T>
struct GumbelNoise {
    Mat<T> exist;
    Mat<T> absent;

    static GumbelNoise draw(Eigen::Index rows, Eigen::Index cols, numerics::Rng& rng);
};

// Differentiable posterior quantities for one tape.
template <typename T>
struct EdgeTerms {
    Var<T> logit;          // u' - v' (or u' in existence-only mode), clamped
    Var<T> sigma;
    Var<T> log_sigma;
    Var<T> log_one_minus;  // ln(1 - sigma)
};

template <typename T>
class CausalGraph {
public:
    CausalGraph(ParamStore<T>& store, const ModelConfig& cfg, numerics::Rng& rng);

    EdgeTerms<T> edges(Tape<T>& tape) const;
    Var<T> weights(Tape<T>& tape) const { return tape.param(ghat_); }

    // Relaxed exist-category weight of the two-way Gumbel-softmax.
    Var<T> relaxed(const EdgeTerms<T>& e, const GumbelNoise<T>& noise, T tau) const;

    // Current Sigma and G-hat without recording gradients.
    Mat<T> probabilities() const;
    Mat<T> weight_values() const { return store_->value(ghat_); }

    std::size_t stocks() const { return stocks_; }
    std::size_t lags() const { return lags_; }
    GraphMode mode() const { return mode_; }

private:
    Var<T> transformed(Tape<T>& tape, typename ParamStore<T>::Id raw, const numerics::Mlp<T>& h) const;

    ParamStore<T>* store_;
    std::size_t stocks_;
    std::size_t lags_;
    GraphMode mode_;
    typename ParamStore<T>::Id u_ = 0;
    typename ParamStore<T>::Id v_ = 0;
    typename ParamStore<T>::Id ghat_ = 0;
    numerics::Mlp<T> h_u_;
    numerics::Mlp<T> h_v_;
};

// sum over edges of -s ln s - (1 - s) ln(1 - s).
template <typename T>
Var<T> posterior_entropy(const EdgeTerms<T>& e);

// -lambda_s |G|^2 - lambda_d |G - G_p|^2. `prior` may be null when
// lambda_d is 0.
template <typename T>
Var<T> log_prior(const Var<T>& graph, T lambda_s, T lambda_d, const Mat<T>* prior);

// Plain-value versions used for reporting and tests.
double edge_probability(double u, double v);
double posterior_entropy_value(const numerics::MatD& sigma);
double log_prior_value(const numerics::MatD& graph, double lambda_s, double lambda_d, const numerics::MatD* prior);

struct Strength {
    numerics::MatD per_lag;  // (L * D) x D
    numerics::MatD mean;     // D x D, averaged over lags
};
Strength causal_strength(const numerics::MatD& graph, const numerics::MatD& ghat, std::size_t lags);

// Rows `lag,from_symbol,to_symbol,value` with value 0 or 1; unlisted edges 0.
numerics::MatD load_prior_graph(const std::filesystem::path& path, const std::vector<std::string>& symbols,
                                std::size_t lags);

// Sigma, G-hat, one hard sample and the strength matrices keyed by symbol.
nlohmann::json graph_export(const std::vector<std::string>& symbols, std::size_t lags, const numerics::MatD& sigma,
                            const numerics::MatD& ghat, const numerics::MatD& hard);

extern template struct GumbelNoise<float>;
extern template struct GumbelNoise<double>;
extern template class CausalGraph<float>;
extern template class CausalGraph<double>;
extern template Var<float> posterior_entropy(const EdgeTerms<float>&);
extern template Var<double> posterior_entropy(const EdgeTerms<double>&);
extern template Var<float> log_prior(const Var<float>&, float, float, const Mat<float>*);
extern template Var<double> log_prior(const Var<double>&, double, double, const Mat<double>*);

}  // namespace causalstock::model
