#pragma once

#include "causalstock/numerics/tape.h"

#include <vector>

// Differentiable primitives. Every function records one node on the tape its
// arguments live on; shape mismatches throw ConfigError.
namespace causalstock::numerics {

// x (n x in) * W (in x out) + b (1 x out, broadcast over rows).
template <typename T>
Var<T> affine(const Var<T>& x, const Var<T>& w, const Var<T>& b);
template <typename T>
Var<T> matmul(const Var<T>& a, const Var<T>& b);

template <typename T>
Var<T> add(const Var<T>& a, const Var<T>& b);
template <typename T>
Var<T> sub(const Var<T>& a, const Var<T>& b);
template <typename T>
Var<T> mul(const Var<T>& a, const Var<T>& b);
template <typename T>
Var<T> scale(const Var<T>& a, T s);
template <typename T>
Var<T> add_scalar(const Var<T>& a, T s);

template <typename T>
Var<T> tanh(const Var<T>& a);
template <typename T>
Var<T> sigmoid(const Var<T>& a);
template <typename T>
Var<T> exp(const Var<T>& a);
template <typename T>
Var<T> log(const Var<T>& a);
// Values outside [lo, hi] are clipped and pass no gradient.
template <typename T>
Var<T> clamp(const Var<T>& a, T lo, T hi);

template <typename T>
Var<T> concat_cols(const std::vector<Var<T>>& parts);
template <typename T>
Var<T> concat_rows(const std::vector<Var<T>>& parts);
template <typename T>
Var<T> slice_rows(const Var<T>& a, Eigen::Index start, Eigen::Index count);
// Row-major reinterpretation; element count must match.
template <typename T>
Var<T> reshape(const Var<T>& a, Eigen::Index rows, Eigen::Index cols);
// 1 x c row repeated n times.
template <typename T>
Var<T> broadcast_rows(const Var<T>& row, Eigen::Index n);

template <typename T>
Var<T> sum(const Var<T>& a);
template <typename T>
Var<T> mean(const Var<T>& a);
// Mean of item rows per segment; segments without items produce zero rows.
template <typename T>
Var<T> segment_mean(const Var<T>& items, const std::vector<int>& segment_of_item, Eigen::Index segments);

// Forward identity; backward contributes nothing upstream.
template <typename T>
Var<T> stop_gradient(const Var<T>& a);

// Two-category Gumbel-softmax: weight of category `a` in
// softmax((a + noise_a) / tau, (b + noise_b) / tau).
template <typename T>
Var<T> gumbel_softmax2(const Var<T>& logit_a, const Var<T>& logit_b, const Mat<T>& noise_a,
                       const Mat<T>& noise_b, T tau);

// Forward value is exactly 1 where relaxed > 0.5 and 0 elsewhere; the
// adjoint passes to `relaxed` unchanged.
template <typename T>
Var<T> straight_through(const Var<T>& relaxed);

// Graph-weighted aggregation over parent rows. `weights` is R x D (R parent
// slots, D children); `features` stacks `blocks` blocks of R rows. Output row
// i * blocks + b holds sum_r weights(r, i) * features(b * R + r, :).
template <typename T>
Var<T> graph_aggregate(const Var<T>& weights, const Var<T>& features, Eigen::Index blocks);

template <typename T>
Var<T> operator+(const Var<T>& a, const Var<T>& b) { return add(a, b); }
template <typename T>
Var<T> operator-(const Var<T>& a, const Var<T>& b) { return sub(a, b); }
template <typename T>
Var<T> operator*(const Var<T>& a, const Var<T>& b) { return mul(a, b); }
template <typename T>
Var<T> operator-(const Var<T>& a) { return scale(a, T(-1)); }

}  // namespace causalstock::numerics
