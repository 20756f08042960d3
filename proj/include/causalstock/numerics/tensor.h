#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <string>
#include <vector>

namespace causalstock::numerics {

// Dense row-major matrix. Higher-rank tensors are stored flattened, e.g. an
// L x D x D graph tensor is an (L*D) x D matrix with row l*D + j.
template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using MatD = Mat<double>;
using MatF = Mat<float>;

struct Shape {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;

    friend bool operator==(const Shape&, const Shape&) = default;
};

template <typename T>
Shape shape_of(const Mat<T>& m) {
    return {m.rows(), m.cols()};
}

std::string to_string(const Shape& s);

// Throws ConfigError when the shapes differ; `what` names the operation.
void require_same_shape(const Shape& a, const Shape& b, const char* what);

template <typename To, typename From>
Mat<To> cast(const Mat<From>& m) {
    return m.template cast<To>();
}

}  // namespace causalstock::numerics
