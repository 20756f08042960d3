#include "causalstock/model/model.h"

#include "causalstock/numerics/ops.h"

namespace causalstock::model {

using namespace numerics;

template <typename T>
Model<T>::Model(const ModelConfig& cfg, std::uint64_t seed) : cfg_(cfg), store_(std::make_unique<ParamStore<T>>()) {
    if (cfg_.stocks < 1) throw ConfigError("model needs at least one stock");
    Rng rng(seed);
    encoders_ = std::make_unique<Encoders<T>>(*store_, cfg_, rng);
    graph_ = std::make_unique<CausalGraph<T>>(*store_, cfg_, rng);
    fcm_ = std::make_unique<Fcm<T>>(*store_, cfg_, rng);
}

template <typename T>
void Model<T>::load(const ParamStore<T>& values) {
    if (values.size() != store_->size()) {
        throw DataError("checkpoint has " + std::to_string(values.size()) + " parameters, model expects " +
                        std::to_string(store_->size()));
    }
    for (std::size_t k = 0; k < store_->size(); ++k) {
        const std::string& name = store_->name(k);
        if (!values.contains(name)) throw DataError("checkpoint lacks parameter '" + name + "'");
        const auto id = values.id(name);
        if (shape_of(values.value(id)) != shape_of(store_->value(k))) {
            throw DataError("checkpoint parameter '" + name + "' has shape " + to_string(shape_of(values.value(id))) +
                            ", expected " + to_string(shape_of(store_->value(k))));
        }
        store_->value(k) = values.value(id);
        store_->first_moment(k) = values.first_moment(id);
        store_->second_moment(k) = values.second_moment(id);
    }
    store_->step() = values.step();
}

template <typename T>
MatD Model<T>::inference_graph(Rng* rng) const {
    const MatD s = sigma();
    switch (cfg_.inference) {
        case InferenceGraph::Map: return (s.array() > 0.5).template cast<double>().matrix();
        case InferenceGraph::Mean: return s;
        case InferenceGraph::Sample: {
            if (!rng) throw ConfigError("sampled inference graph needs a generator");
            MatD g(s.rows(), s.cols());
            for (Eigen::Index k = 0; k < s.size(); ++k) g.data()[k] = rng->bernoulli(s.data()[k]) ? 1.0 : 0.0;
            return g;
        }
    }
    return s;
}

template <typename T>
Mat<T> Model<T>::predict(const Batch<T>& batch, const MatD& graph) const {
    Tape<T> tape(store_.get());
    Var<T> g = tape.constant(graph.template cast<T>());
    return fcm_->forward(tape, *encoders_, batch, g, g, graph_->weights(tape)).prob.value();
}

template class Model<float>;
template class Model<double>;

}  // namespace causalstock::model
