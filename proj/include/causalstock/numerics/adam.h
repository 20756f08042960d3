#pragma once

#include "causalstock/error.h"
#include "causalstock/numerics/param_store.h"

#include <cmath>

namespace causalstock::numerics {

struct AdamConfig {
    double learning_rate = 1e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// Throws NumericError naming the first parameter whose gradient is not finite.
template <typename T>
void check_finite_gradients(const ParamStore<T>& store) {
    for (std::size_t i = 0; i < store.size(); ++i) {
        if (!store.grad(i).allFinite()) {
            throw NumericError("non-finite gradient in parameter '" + store.name(i) + "'");
        }
    }
}

// Bias-corrected Adam update using the store's moment buffers.
template <typename T>
void adam_step(ParamStore<T>& store, const AdamConfig& cfg) {
    check_finite_gradients(store);
    const long t = ++store.step();
    const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
    const T b1 = static_cast<T>(cfg.beta1);
    const T b2 = static_cast<T>(cfg.beta2);
    const T step = static_cast<T>(cfg.learning_rate / c1);
    const T inv_c2 = static_cast<T>(1.0 / c2);
    const T eps = static_cast<T>(cfg.epsilon);
    for (std::size_t i = 0; i < store.size(); ++i) {
        const auto& g = store.grad(i).array();
        auto m = store.first_moment(i).array();
        auto v = store.second_moment(i).array();
        m = b1 * m + (T(1) - b1) * g;
        v = b2 * v + (T(1) - b2) * g.square();
        store.value(i).array() -= step * m / ((v * inv_c2).sqrt() + eps);
    }
}

}  // namespace causalstock::numerics
