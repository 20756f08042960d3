#include "causalstock/numerics/tensor.h"

#include "causalstock/error.h"

namespace causalstock::numerics {

std::string to_string(const Shape& s) {
    return std::to_string(s.rows) + "x" + std::to_string(s.cols);
}

void require_same_shape(const Shape& a, const Shape& b, const char* what) {
    if (!(a == b)) {
        throw ConfigError(std::string(what) + ": shape mismatch " + to_string(a) + " vs " + to_string(b));
    }
}

}  // namespace causalstock::numerics
