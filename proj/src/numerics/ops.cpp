#include "causalstock/numerics/ops.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace causalstock::numerics {

namespace {

template <typename T>
Tape<T>& tape_of(const Var<T>& a) {
    if (!a.valid()) throw ConfigError("operation on an unbound variable");
    return *a.tape();
}

template <typename T>
Tape<T>& tape_of(const Var<T>& a, const Var<T>& b) {
    if (a.tape() != b.tape()) throw ConfigError("operands recorded on different tapes");
    return tape_of(a);
}

template <typename T>
T stable_sigmoid(T x) {
    if (x >= T(0)) {
        return T(1) / (T(1) + std::exp(-x));
    }
    const T e = std::exp(x);
    return e / (T(1) + e);
}

}  // namespace

template <typename T>
Var<T> matmul(const Var<T>& a, const Var<T>& b) {
    Tape<T>& t = tape_of(a, b);
    if (a.cols() != b.rows()) {
        throw ConfigError("matmul: shape mismatch " + to_string(a.shape()) + " * " + to_string(b.shape()));
    }
    Mat<T> out = a.value() * b.value();
    return t.record(std::move(out), {a, b}, [a, b](Tape<T>& tp, const Mat<T>& g) {
        if (tp.requires_grad(a)) tp.accumulate(a, g * b.value().transpose());
        if (tp.requires_grad(b)) tp.accumulate(b, a.value().transpose() * g);
    });
}

template <typename T>
Var<T> affine(const Var<T>& x, const Var<T>& w, const Var<T>& b) {
    Tape<T>& t = tape_of(x, w);
    tape_of(w, b);
    if (x.cols() != w.rows() || b.rows() != 1 || b.cols() != w.cols()) {
        throw ConfigError("affine: shape mismatch x " + to_string(x.shape()) + ", W " + to_string(w.shape()) +
                          ", b " + to_string(b.shape()));
    }
    Mat<T> out = x.value() * w.value();
    out.rowwise() += b.value().row(0);
    return t.record(std::move(out), {x, w, b}, [x, w, b](Tape<T>& tp, const Mat<T>& g) {
        if (tp.requires_grad(x)) tp.accumulate(x, g * w.value().transpose());
        if (tp.requires_grad(w)) tp.accumulate(w, x.value().transpose() * g);
        if (tp.requires_grad(b)) tp.accumulate(b, g.colwise().sum());
    });
}

template <typename T>
Var<T> add(const Var<T>& a, const Var<T>& b) {
    Tape<T>& t = tape_of(a, b);
    require_same_shape(a.shape(), b.shape(), "add");
    Mat<T> out = a.value() + b.value();
    return t.record(std::move(out), {a, b}, [a, b](Tape<T>& tp, const Mat<T>& g) {
        tp.accumulate(a, g);
        tp.accumulate(b, g);
    });
}

template <typename T>
Var<T> sub(const Var<T>& a, const Var<T>& b) {
    Tape<T>& t = tape_of(a, b);
    require_same_shape(a.shape(), b.shape(), "sub");
    Mat<T> out = a.value() - b.value();
    return t.record(std::move(out), {a, b}, [a, b](Tape<T>& tp, const Mat<T>& g) {
        tp.accumulate(a, g);
        if (tp.requires_grad(b)) tp.accumulate(b, Mat<T>(-g));
    });
}

template <typename T>
Var<T> mul(const Var<T>& a, const Var<T>& b) {
    Tape<T>& t = tape_of(a, b);
    require_same_shape(a.shape(), b.shape(), "mul");
    Mat<T> out = a.value().cwiseProduct(b.value());
    return t.record(std::move(out), {a, b}, [a, b](Tape<T>& tp, const Mat<T>& g) {
        if (tp.requires_grad(a)) tp.accumulate(a, g.cwiseProduct(b.value()));
        if (tp.requires_grad(b)) tp.accumulate(b, g.cwiseProduct(a.value()));
    });
}

template <typename T>
Var<T> scale(const Var<T>& a, T s) {
    Tape<T>& t = tape_of(a);
    Mat<T> out = a.value() * s;
    return t.record(std::move(out), {a}, [a, s](Tape<T>& tp, const Mat<T>& g) { tp.accumulate(a, Mat<T>(g * s)); });
}

template <typename T>
Var<T> add_scalar(const Var<T>& a, T s) {
    Tape<T>& t = tape_of(a);
    Mat<T> out = a.value().array() + s;
    return t.record(std::move(out), {a}, [a](Tape<T>& tp, const Mat<T>& g) { tp.accumulate(a, g); });
}

template <typename T>
Var<T> tanh(const Var<T>& a) {
    Tape<T>& t = tape_of(a);
    Mat<T> out = a.value().array().tanh();
    const auto id = t.size();
    return t.record(std::move(out), {a}, [a, id](Tape<T>& tp, const Mat<T>& g) {
        const Mat<T>& y = tp.value(id);
        tp.accumulate(a, Mat<T>(g.array() * (T(1) - y.array().square())));
    });
}

template <typename T>
Var<T> sigmoid(const Var<T>& a) {
    Tape<T>& t = tape_of(a);
    Mat<T> out = a.value().unaryExpr([](T x) { return stable_sigmoid(x); });
    const auto id = t.size();
    return t.record(std::move(out), {a}, [a, id](Tape<T>& tp, const Mat<T>& g) {
        const Mat<T>& y = tp.value(id);
        tp.accumulate(a, Mat<T>(g.array() * y.array() * (T(1) - y.array())));
    });
}

template <typename T>
Var<T> exp(const Var<T>& a) {
    Tape<T>& t = tape_of(a);
    Mat<T> out = a.value().array().exp();
    const auto id = t.size();
    return t.record(std::move(out), {a}, [a, id](Tape<T>& tp, const Mat<T>& g) {
        tp.accumulate(a, Mat<T>(g.array() * tp.value(id).array()));
    });
}

template <typename T>
Var<T> log(const Var<T>& a) {
    Tape<T>& t = tape_of(a);
    Mat<T> out = a.value().array().log();
    return t.record(std::move(out), {a}, [a](Tape<T>& tp, const Mat<T>& g) {
        tp.accumulate(a, Mat<T>(g.array() / a.value().array()));
    });
}

template <typename T>
Var<T> clamp(const Var<T>& a, T lo, T hi) {
    Tape<T>& t = tape_of(a);
    Mat<T> out = a.value().cwiseMax(lo).cwiseMin(hi);
    return t.record(std::move(out), {a}, [a, lo, hi](Tape<T>& tp, const Mat<T>& g) {
        const auto& x = a.value().array();
        tp.accumulate(a, Mat<T>((x >= lo && x <= hi).select(g.array(), T(0))));
    });
}

template <typename T>
Var<T> concat_cols(const std::vector<Var<T>>& parts) {
    if (parts.empty()) throw ConfigError("concat_cols: no operands");
    Tape<T>& t = tape_of(parts.front());
    const Eigen::Index rows = parts.front().rows();
    Eigen::Index cols = 0;
    for (const auto& p : parts) {
        tape_of(parts.front(), p);
        if (p.rows() != rows) throw ConfigError("concat_cols: row count mismatch");
        cols += p.cols();
    }
    Mat<T> out(rows, cols);
    Eigen::Index c = 0;
    for (const auto& p : parts) {
        out.middleCols(c, p.cols()) = p.value();
        c += p.cols();
    }
    return t.record(std::move(out), parts, [parts](Tape<T>& tp, const Mat<T>& g) {
        Eigen::Index off = 0;
        for (const auto& p : parts) {
            if (tp.requires_grad(p)) tp.accumulate(p, Mat<T>(g.middleCols(off, p.cols())));
            off += p.cols();
        }
    });
}

template <typename T>
Var<T> concat_rows(const std::vector<Var<T>>& parts) {
    if (parts.empty()) throw ConfigError("concat_rows: no operands");
    Tape<T>& t = tape_of(parts.front());
    const Eigen::Index cols = parts.front().cols();
    Eigen::Index rows = 0;
    for (const auto& p : parts) {
        tape_of(parts.front(), p);
        if (p.cols() != cols) throw ConfigError("concat_rows: column count mismatch");
        rows += p.rows();
    }
    Mat<T> out(rows, cols);
    Eigen::Index r = 0;
    for (const auto& p : parts) {
        out.middleRows(r, p.rows()) = p.value();
        r += p.rows();
    }
    return t.record(std::move(out), parts, [parts](Tape<T>& tp, const Mat<T>& g) {
        Eigen::Index off = 0;
        for (const auto& p : parts) {
            if (tp.requires_grad(p)) tp.accumulate(p, Mat<T>(g.middleRows(off, p.rows())));
            off += p.rows();
        }
    });
}

template <typename T>
Var<T> slice_rows(const Var<T>& a, Eigen::Index start, Eigen::Index count) {
    Tape<T>& t = tape_of(a);
    if (start < 0 || count < 0 || start + count > a.rows()) {
        throw ConfigError("slice_rows: range [" + std::to_string(start) + ", " + std::to_string(start + count) +
                          ") outside " + to_string(a.shape()));
    }
    Mat<T> out = a.value().middleRows(start, count);
    return t.record(std::move(out), {a}, [a, start, count](Tape<T>& tp, const Mat<T>& g) {
        Mat<T> full = Mat<T>::Zero(a.rows(), a.cols());
        full.middleRows(start, count) = g;
        tp.accumulate(a, full);
    });
}

template <typename T>
Var<T> reshape(const Var<T>& a, Eigen::Index rows, Eigen::Index cols) {
    Tape<T>& t = tape_of(a);
    if (rows * cols != a.value().size()) {
        throw ConfigError("reshape: cannot view " + to_string(a.shape()) + " as " + to_string(Shape{rows, cols}));
    }
    Mat<T> out = Eigen::Map<const Mat<T>>(a.value().data(), rows, cols);
    return t.record(std::move(out), {a}, [a](Tape<T>& tp, const Mat<T>& g) {
        tp.accumulate(a, Mat<T>(Eigen::Map<const Mat<T>>(g.data(), a.rows(), a.cols())));
    });
}

template <typename T>
Var<T> broadcast_rows(const Var<T>& row, Eigen::Index n) {
    Tape<T>& t = tape_of(row);
    if (row.rows() != 1) throw ConfigError("broadcast_rows: operand must be a single row, got " + to_string(row.shape()));
    Mat<T> out = row.value().replicate(n, 1);
    return t.record(std::move(out), {row}, [row](Tape<T>& tp, const Mat<T>& g) {
        tp.accumulate(row, Mat<T>(g.colwise().sum()));
    });
}

template <typename T>
Var<T> sum(const Var<T>& a) {
    Tape<T>& t = tape_of(a);
    Mat<T> out(1, 1);
    out(0, 0) = a.value().sum();
    return t.record(std::move(out), {a}, [a](Tape<T>& tp, const Mat<T>& g) {
        tp.accumulate(a, Mat<T>::Constant(a.rows(), a.cols(), g(0, 0)));
    });
}

template <typename T>
Var<T> mean(const Var<T>& a) {
    const auto n = a.value().size();
    if (n == 0) throw ConfigError("mean of an empty array");
    return scale(sum(a), T(1) / static_cast<T>(n));
}

template <typename T>
Var<T> segment_mean(const Var<T>& items, const std::vector<int>& segment_of_item, Eigen::Index segments) {
    Tape<T>& t = tape_of(items);
    if (static_cast<Eigen::Index>(segment_of_item.size()) != items.rows()) {
        throw ConfigError("segment_mean: " + std::to_string(segment_of_item.size()) + " segment ids for " +
                          std::to_string(items.rows()) + " items");
    }
    std::vector<int> counts(static_cast<std::size_t>(segments), 0);
    for (int s : segment_of_item) {
        if (s < 0 || s >= segments) throw ConfigError("segment_mean: segment id out of range");
        ++counts[static_cast<std::size_t>(s)];
    }
    Mat<T> out = Mat<T>::Zero(segments, items.cols());
    for (Eigen::Index k = 0; k < items.rows(); ++k) {
        out.row(segment_of_item[static_cast<std::size_t>(k)]) += items.value().row(k);
    }
    for (Eigen::Index s = 0; s < segments; ++s) {
        if (counts[static_cast<std::size_t>(s)] > 1) out.row(s) /= static_cast<T>(counts[static_cast<std::size_t>(s)]);
    }
    return t.record(std::move(out), {items}, [items, segment_of_item, counts](Tape<T>& tp, const Mat<T>& g) {
        Mat<T> d(items.rows(), items.cols());
        for (Eigen::Index k = 0; k < items.rows(); ++k) {
            const auto s = static_cast<std::size_t>(segment_of_item[static_cast<std::size_t>(k)]);
            d.row(k) = g.row(static_cast<Eigen::Index>(s)) / static_cast<T>(counts[s]);
        }
        tp.accumulate(items, d);
    });
}

template <typename T>
Var<T> stop_gradient(const Var<T>& a) {
    Tape<T>& t = tape_of(a);
    return t.constant(a.value());
}

template <typename T>
Var<T> gumbel_softmax2(const Var<T>& logit_a, const Var<T>& logit_b, const Mat<T>& noise_a, const Mat<T>& noise_b,
                       T tau) {
    Tape<T>& t = tape_of(logit_a, logit_b);
    require_same_shape(logit_a.shape(), logit_b.shape(), "gumbel_softmax2");
    require_same_shape(logit_a.shape(), shape_of(noise_a), "gumbel_softmax2 noise");
    require_same_shape(logit_a.shape(), shape_of(noise_b), "gumbel_softmax2 noise");
    if (!(tau > T(0))) throw ConfigError("gumbel_softmax2: temperature must be positive");
    // softmax over two categories is the logistic of the scaled difference.
    Mat<T> diff = ((logit_a.value() + noise_a) - (logit_b.value() + noise_b)) / tau;
    Mat<T> out = diff.unaryExpr([](T x) { return stable_sigmoid(x); });
    const auto id = t.size();
    return t.record(std::move(out), {logit_a, logit_b}, [logit_a, logit_b, id, tau](Tape<T>& tp, const Mat<T>& g) {
        const Mat<T>& y = tp.value(id);
        Mat<T> d = g.array() * y.array() * (T(1) - y.array()) / tau;
        if (tp.requires_grad(logit_b)) tp.accumulate(logit_b, Mat<T>(-d));
        tp.accumulate(logit_a, d);
    });
}

template <typename T>
Var<T> straight_through(const Var<T>& relaxed) {
    Tape<T>& t = tape_of(relaxed);
    Mat<T> out = relaxed.value().unaryExpr([](T x) { return x > T(0.5) ? T(1) : T(0); });
    return t.record(std::move(out), {relaxed}, [relaxed](Tape<T>& tp, const Mat<T>& g) { tp.accumulate(relaxed, g); });
}

template <typename T>
Var<T> graph_aggregate(const Var<T>& weights, const Var<T>& features, Eigen::Index blocks) {
    Tape<T>& t = tape_of(weights, features);
    const Eigen::Index slots = weights.rows();
    const Eigen::Index children = weights.cols();
    const Eigen::Index width = features.cols();
    if (blocks <= 0 || features.rows() != slots * blocks) {
        throw ConfigError("graph_aggregate: features " + to_string(features.shape()) + " do not stack " +
                          std::to_string(blocks) + " blocks of " + std::to_string(slots) + " rows");
    }
    using Strided = Eigen::Map<Mat<T>, 0, Eigen::OuterStride<>>;
    using CStrided = Eigen::Map<const Mat<T>, 0, Eigen::OuterStride<>>;
    Mat<T> out(children * blocks, width);
    for (Eigen::Index b = 0; b < blocks; ++b) {
        Strided dst(out.data() + b * width, children, width, Eigen::OuterStride<>(blocks * width));
        dst.noalias() = weights.value().transpose() * features.value().middleRows(b * slots, slots);
    }
    return t.record(std::move(out), {weights, features},
                    [weights, features, blocks, slots, children, width](Tape<T>& tp, const Mat<T>& g) {
                        const bool dw = tp.requires_grad(weights);
                        const bool df = tp.requires_grad(features);
                        Mat<T> gw = Mat<T>::Zero(slots, children);
                        Mat<T> gf(df ? features.rows() : 0, width);
                        for (Eigen::Index b = 0; b < blocks; ++b) {
                            CStrided gb(g.data() + b * width, children, width, Eigen::OuterStride<>(blocks * width));
                            if (dw) gw.noalias() += features.value().middleRows(b * slots, slots) * gb.transpose();
                            if (df) gf.middleRows(b * slots, slots).noalias() = weights.value() * gb;
                        }
                        if (dw) tp.accumulate(weights, gw);
                        if (df) tp.accumulate(features, gf);
                    });
}

#define CAUSALSTOCK_INSTANTIATE_OPS(T)                                                                       \
    template Var<T> affine(const Var<T>&, const Var<T>&, const Var<T>&);                                     \
    template Var<T> matmul(const Var<T>&, const Var<T>&);                                                    \
    template Var<T> add(const Var<T>&, const Var<T>&);                                                       \
    template Var<T> sub(const Var<T>&, const Var<T>&);                                                       \
    template Var<T> mul(const Var<T>&, const Var<T>&);                                                       \
    template Var<T> scale(const Var<T>&, T);                                                                 \
    template Var<T> add_scalar(const Var<T>&, T);                                                            \
    template Var<T> tanh(const Var<T>&);                                                                     \
    template Var<T> sigmoid(const Var<T>&);                                                                  \
    template Var<T> exp(const Var<T>&);                                                                      \
    template Var<T> log(const Var<T>&);                                                                      \
    template Var<T> clamp(const Var<T>&, T, T);                                                              \
    template Var<T> concat_cols(const std::vector<Var<T>>&);                                                 \
    template Var<T> concat_rows(const std::vector<Var<T>>&);                                                 \
    template Var<T> slice_rows(const Var<T>&, Eigen::Index, Eigen::Index);                                   \
    template Var<T> reshape(const Var<T>&, Eigen::Index, Eigen::Index);                                      \
    template Var<T> broadcast_rows(const Var<T>&, Eigen::Index);                                             \
    template Var<T> sum(const Var<T>&);                                                                      \
    template Var<T> mean(const Var<T>&);                                                                     \
    template Var<T> segment_mean(const Var<T>&, const std::vector<int>&, Eigen::Index);                      \
    template Var<T> stop_gradient(const Var<T>&);                                                            \
    template Var<T> gumbel_softmax2(const Var<T>&, const Var<T>&, const Mat<T>&, const Mat<T>&, T);          \
    template Var<T> straight_through(const Var<T>&);                                                         \
    template Var<T> graph_aggregate(const Var<T>&, const Var<T>&, Eigen::Index);

CAUSALSTOCK_INSTANTIATE_OPS(float)
CAUSALSTOCK_INSTANTIATE_OPS(double)

#undef CAUSALSTOCK_INSTANTIATE_OPS

}  // namespace causalstock::numerics
