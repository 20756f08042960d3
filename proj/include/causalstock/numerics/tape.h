#pragma once

#include "causalstock/numerics/param_store.h"
#include "causalstock/numerics/tensor.h"

#include <cstddef>
#include <functional>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace causalstock::numerics {

template <typename T>
class Tape;

// Handle to a value recorded on a tape.
template <typename T>
class Var {
public:
    Var() = default;
    Var(Tape<T>* tape, std::size_t id) : tape_(tape), id_(id) {}

    bool valid() const { return tape_ != nullptr; }
    Tape<T>* tape() const { return tape_; }
    std::size_t id() const { return id_; }

    const Mat<T>& value() const;
    Shape shape() const { return shape_of(value()); }
    Eigen::Index rows() const { return value().rows(); }
    Eigen::Index cols() const { return value().cols(); }
    // Gradient after Tape::backward; empty when nothing flowed into this node.
    const Mat<T>& grad() const;
    T scalar() const;

private:
    Tape<T>* tape_ = nullptr;
    std::size_t id_ = 0;
};

// Linear record of primitive operations. Adjoints are replayed in reverse
// order; nodes that do not depend on any parameter are never visited.
template <typename T>
class Tape {
public:
    // Receives the node's output adjoint and adds contributions to parents
    // through Tape::accumulate.
    using Backward = std::function<void(Tape&, const Mat<T>& out_grad)>;

    explicit Tape(ParamStore<T>* store = nullptr) : store_(store) {}

    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    Var<T> constant(Mat<T> value);
    // Leaf bound to a store entry. Repeated calls return the same node.
    Var<T> param(typename ParamStore<T>::Id id);
    Var<T> param(std::string_view name);

    // Records a derived node. `parents` decides whether it requires grad.
    Var<T> record(Mat<T> value, std::initializer_list<Var<T>> parents, Backward backward);
    Var<T> record(Mat<T> value, const std::vector<Var<T>>& parents, Backward backward);

    // Seeds d(loss)/d(loss) = 1, replays adjoints and adds parameter
    // gradients into the store. The loss must be 1x1.
    void backward(Var<T> loss);

    void accumulate(const Var<T>& v, const Mat<T>& contribution);
    bool requires_grad(const Var<T>& v) const { return nodes_[v.id()].requires_grad; }

    const Mat<T>& value(std::size_t id) const { return nodes_[id].value; }
    const Mat<T>& grad(std::size_t id) const { return nodes_[id].grad; }
    std::size_t size() const { return nodes_.size(); }
    ParamStore<T>* store() const { return store_; }

private:
    struct Node {
        Mat<T> value;
        Mat<T> grad;
        Backward backward;
        bool requires_grad = false;
        std::ptrdiff_t param = -1;
    };

    std::vector<Node> nodes_;
    std::unordered_map<std::size_t, std::size_t> param_nodes_;
    ParamStore<T>* store_;
};

template <typename T>
const Mat<T>& Var<T>::value() const {
    return tape_->value(id_);
}

template <typename T>
const Mat<T>& Var<T>::grad() const {
    return tape_->grad(id_);
}

template <typename T>
T Var<T>::scalar() const {
    const auto& v = value();
    if (v.size() != 1) throw ConfigError("scalar() on non-scalar value of shape " + to_string(shape_of(v)));
    return v(0, 0);
}

extern template class Tape<float>;
extern template class Tape<double>;

}  // namespace causalstock::numerics
