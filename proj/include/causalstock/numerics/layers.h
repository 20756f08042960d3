#pragma once

#include "causalstock/numerics/ops.h"
#include "causalstock/numerics/param_store.h"
#include "causalstock/numerics/rng.h"

#include <cmath>
#include <string>
#include <vector>

namespace causalstock::numerics {

// Glorot/Xavier uniform initialization with explicit fan sizes.
template <typename T>
Mat<T> xavier_uniform(Eigen::Index rows, Eigen::Index cols, double fan_in, double fan_out, Rng& rng) {
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    Mat<T> m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = static_cast<T>(rng.uniform(-limit, limit));
    }
    return m;
}

template <typename T>
Mat<T> xavier_uniform(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    return xavier_uniform<T>(rows, cols, static_cast<double>(rows), static_cast<double>(cols), rng);
}

// Affine layer registered as `<prefix>.W` (in x out) and `<prefix>.b` (1 x out).
template <typename T>
class Linear {
public:
    Linear() = default;
    Linear(ParamStore<T>& store, const std::string& prefix, Eigen::Index in, Eigen::Index out, Rng& rng)
        : in_(in), out_(out) {
        w_ = store.add(prefix + ".W", xavier_uniform<T>(in, out, rng));
        b_ = store.add(prefix + ".b", Mat<T>::Zero(1, out));
    }

    Var<T> operator()(Tape<T>& tape, const Var<T>& x) const {
        return affine(x, tape.param(w_), tape.param(b_));
    }

    Eigen::Index in() const { return in_; }
    Eigen::Index out() const { return out_; }
    typename ParamStore<T>::Id weight_id() const { return w_; }
    typename ParamStore<T>::Id bias_id() const { return b_; }

private:
    Eigen::Index in_ = 0;
    Eigen::Index out_ = 0;
    typename ParamStore<T>::Id w_ = 0;
    typename ParamStore<T>::Id b_ = 0;
};

// Stack of `depth` affine layers with tanh between them (none at the output).
template <typename T>
class Mlp {
public:
    Mlp() = default;
    Mlp(ParamStore<T>& store, const std::string& prefix, Eigen::Index in, Eigen::Index hidden, Eigen::Index out,
        int depth, Rng& rng) {
        if (depth < 1) throw ConfigError(prefix + ": MLP depth must be >= 1");
        Eigen::Index width = in;
        for (int k = 0; k < depth; ++k) {
            const Eigen::Index next = (k + 1 == depth) ? out : hidden;
            layers_.emplace_back(store, prefix + ".l" + std::to_string(k), width, next, rng);
            width = next;
        }
    }

    Var<T> operator()(Tape<T>& tape, Var<T> x) const {
        for (std::size_t k = 0; k < layers_.size(); ++k) {
            x = layers_[k](tape, x);
            if (k + 1 < layers_.size()) x = tanh(x);
        }
        return x;
    }

    const std::vector<Linear<T>>& layers() const { return layers_; }
    Eigen::Index out() const { return layers_.empty() ? 0 : layers_.back().out(); }

private:
    std::vector<Linear<T>> layers_;
};

}  // namespace causalstock::numerics
