#include "causalstock/numerics/tape.h"

#include <string>

namespace causalstock::numerics {

template <typename T>
Var<T> Tape<T>::constant(Mat<T> value) {
    Node n;
    n.value = std::move(value);
    nodes_.push_back(std::move(n));
    return Var<T>(this, nodes_.size() - 1);
}

template <typename T>
Var<T> Tape<T>::param(typename ParamStore<T>::Id id) {
    if (store_ == nullptr) throw ConfigError("tape has no parameter store");
    if (auto it = param_nodes_.find(id); it != param_nodes_.end()) {
        return Var<T>(this, it->second);
    }
    Node n;
    n.value = store_->value(id);
    n.requires_grad = true;
    n.param = static_cast<std::ptrdiff_t>(id);
    nodes_.push_back(std::move(n));
    param_nodes_.emplace(id, nodes_.size() - 1);
    return Var<T>(this, nodes_.size() - 1);
}

template <typename T>
Var<T> Tape<T>::param(std::string_view name) {
    if (store_ == nullptr) throw ConfigError("tape has no parameter store");
    return param(store_->id(name));
}

template <typename T>
Var<T> Tape<T>::record(Mat<T> value, std::initializer_list<Var<T>> parents, Backward backward) {
    return record(std::move(value), std::vector<Var<T>>(parents), std::move(backward));
}

template <typename T>
Var<T> Tape<T>::record(Mat<T> value, const std::vector<Var<T>>& parents, Backward backward) {
    Node n;
    n.value = std::move(value);
    for (const auto& p : parents) {
        if (p.tape() != this) throw ConfigError("operand recorded on a different tape");
        n.requires_grad = n.requires_grad || nodes_[p.id()].requires_grad;
    }
    if (n.requires_grad) n.backward = std::move(backward);
    nodes_.push_back(std::move(n));
    return Var<T>(this, nodes_.size() - 1);
}

template <typename T>
void Tape<T>::accumulate(const Var<T>& v, const Mat<T>& contribution) {
    Node& n = nodes_[v.id()];
    if (!n.requires_grad) return;
    require_same_shape(shape_of(n.value), shape_of(contribution), "adjoint");
    if (n.grad.size() == 0) {
        n.grad = contribution;
    } else {
        n.grad += contribution;
    }
}

template <typename T>
void Tape<T>::backward(Var<T> loss) {
    if (loss.tape() != this) throw ConfigError("loss recorded on a different tape");
    const Shape s = shape_of(nodes_[loss.id()].value);
    if (s.rows != 1 || s.cols != 1) {
        throw ConfigError("backward requires a scalar loss, got shape " + to_string(s));
    }
    for (auto& n : nodes_) n.grad.resize(0, 0);
    if (!nodes_[loss.id()].requires_grad) return;
    nodes_[loss.id()].grad = Mat<T>::Ones(1, 1);
    for (std::size_t k = loss.id() + 1; k-- > 0;) {
        Node& n = nodes_[k];
        if (!n.requires_grad || n.grad.size() == 0 || !n.backward) continue;
        // Parents always precede their children, so this grad stays put.
        n.backward(*this, n.grad);
    }
    if (store_ == nullptr) return;
    for (const auto& n : nodes_) {
        if (n.param >= 0 && n.grad.size() != 0) {
            store_->grad(static_cast<std::size_t>(n.param)) += n.grad;
        }
    }
}

template class Tape<float>;
template class Tape<double>;

}  // namespace causalstock::numerics
