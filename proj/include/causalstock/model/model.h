#pragma once

#include "causalstock/model/causal_graph.h"
#include "causalstock/model/config.h"
#include "causalstock/model/encoders.h"
#include "causalstock/model/fcm.h"

#include <cstdint>
#include <memory>

namespace causalstock::model {

// Encoders, graph posterior and FCM over one parameter store. Parameters are
// registered in that order, which fixes checkpoint and audit order.
template <typename T>
class Model {
public:
    Model(const ModelConfig& cfg, std::uint64_t seed);

    const ModelConfig& config() const { return cfg_; }
    ParamStore<T>& params() { return *store_; }
    const ParamStore<T>& params() const { return *store_; }
    const Encoders<T>& encoders() const { return *encoders_; }
    const CausalGraph<T>& graph() const { return *graph_; }
    const Fcm<T>& fcm() const { return *fcm_; }

    // Copies values (and Adam state) from a store with the same names and shapes.
    void load(const ParamStore<T>& values);

    numerics::MatD sigma() const { return graph_->probabilities().template cast<double>(); }
    numerics::MatD ghat() const { return graph_->weight_values().template cast<double>(); }

    // Graph used at prediction time; `rng` is only drawn from for Sample.
    numerics::MatD inference_graph(numerics::Rng* rng = nullptr) const;

    // Movement probabilities for a batch under a fixed graph, (D * windows) x 1.
    Mat<T> predict(const Batch<T>& batch, const numerics::MatD& graph) const;

private:
    ModelConfig cfg_;
    std::unique_ptr<ParamStore<T>> store_;
    std::unique_ptr<Encoders<T>> encoders_;
    std::unique_ptr<CausalGraph<T>> graph_;
    std::unique_ptr<Fcm<T>> fcm_;
};

extern template class Model<float>;
extern template class Model<double>;

}  // namespace causalstock::model
